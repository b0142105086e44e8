"""
Command-line interface.

Every subcommand prints one JSON report on stdout; logs go to stderr.
Exit codes: 0 success, 1 failed self-test or internal error,
2 invalid input or guard violation, 3 non-unique maximizer or a flag
escalated by --strict.

Usage:
    diophantine-exponents formula heisenberg --k 3
    diophantine-exponents exponent --family veronese --p 3 --s 2
    diophantine-exponents exponent --manifold veronese_m2_p3.json
    diophantine-exponents empirical --family wedge --qmax 90 --points 8 --csv wedge.csv
    diophantine-exponents selftest --quick
"""

import argparse
import json
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from diophantine_exponents import __version__
from diophantine_exponents.algebra.liealg import LieAlgebra, builtin_algebra, complement_basis, graded_laws_dims, laws_ideal
from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.base.family import ManifoldFamily
from diophantine_exponents.base.types import Flag, Report, SlopeFit
from diophantine_exponents.common.exceptions import (
    DiophantineError,
    GuardExceededError,
    PreconditionError,
    SchemaError,
    UniquenessViolationError,
    UnsupportedError,
    ValidationError,
)
from diophantine_exponents.common.logger import get_logger, parse_module_levels, setup_logger
from diophantine_exponents.common.utils import format_float, format_rational, inputs_hash, parse_rational
from diophantine_exponents.config import ExponentConfig, get_exponent_config
from diophantine_exponents.empirical.dani import dani_systole
from diophantine_exponents.empirical.enumeration import dirichlet_floor, estimate_beta, geometric_span
from diophantine_exponents.empirical.heisenberg import heisenberg_word_min
from diophantine_exponents.exponents.pencil import Pencil, QuasiNorm, is_constraining, is_extremal, unweighted_pencil
from diophantine_exponents.exponents.repthy import FORMULAS, formula_table, veronese_beta
from diophantine_exponents.factory import create_manifold, get_family_class, get_supported_families
from diophantine_exponents.families.explicit import load_manifold
from diophantine_exponents.schemas import validate_payload
from diophantine_exponents.selftest import run_selftest

logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_ESCALATED = 3

FAMILY_PARAMS = ("k", "n", "s", "d", "p")
STRICT_FLAGS = (Flag.IRRATIONAL_LAWS.value,)


# =============================================================================
# Argument parsing
# =============================================================================


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed (default: DIOPHANTINE_SEED)")
    common.add_argument("--threads", type=int, default=None, help="Enumeration worker threads")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-levels", default=None, help="Per-module levels, e.g. empirical.enumeration=DEBUG")
    common.add_argument("--strict", action="store_true", default=None, help="Exit 3 on possible irrational laws")
    common.add_argument("--initial-samples", type=int, default=None)
    common.add_argument("--stabilize-rounds", type=int, default=None)
    return common


def _add_manifold_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--manifold", type=Path, help="Manifold JSON file")
    source.add_argument("--family", help="Built-in family: " + ", ".join(get_supported_families()))
    for name in FAMILY_PARAMS:
        parser.add_argument(f"--{name}", type=int, default=None)
    parser.add_argument("--algebra", help="Built-in spec such as u(3), or a Lie algebra JSON file (family lie)")
    parser.add_argument("--cc-metric", action="store_true", help="Carnot–Carathéodory target weights (family lie)")


def _add_csv_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--csv", type=Path, default=None, help="Write the trace as CSV ('-' prints CSV instead of JSON)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="diophantine-exponents",
        description="Exact almost-sure diophantine exponents and their empirical checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent", parents=[common], help="τ of a manifold over its candidate family")
    _add_manifold_args(p)
    p.add_argument("--strategy", choices=["graded", "flag", "explicit"], default=None)
    p.add_argument("--emit", action="store_true", help="Print the manifold JSON and exit")

    p = sub.add_parser("formula", parents=[common], help="Closed-form exponents of nilpotent families")
    p.add_argument("formula_family", choices=[*FORMULAS, "veronese"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--ks", default=None, help="Comma-separated list of k")
    for name in ("s", "d", "d1", "d2", "dim-last", "p", "m"):
        p.add_argument(f"--{name}", type=int, default=None)
    _add_csv_arg(p)

    p = sub.add_parser("laws", parents=[common], help="Laws ideal and relatively free dimensions")
    p.add_argument("--algebra", required=True, help="Built-in spec or Lie algebra JSON file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="Degree bound (default: step of the algebra)")

    p = sub.add_parser("pencil-check", parents=[common], help="Is the manifold contained in a pencil?")
    _add_manifold_args(p)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--candidate", help="Label of one of the family's candidates")
    target.add_argument("--subspace", type=Path, help="JSON file with the rows spanning W")
    p.add_argument("--a", default=None, help="Threshold on ψ(ker x ∩ W)")
    p.add_argument("--b", default=None, help="Threshold on φ(xW)")
    p.add_argument("--r", type=int, default=None, help="Unweighted pencil {x : dim xW <= r}")

    p = sub.add_parser("empirical", parents=[common], help="Log-log slope of the smallest image quasi-norm")
    _add_manifold_args(p)
    p.add_argument("--matrix", type=Path, help="JSON file with a real matrix (unweighted quasi-norms)")
    p.add_argument("--q0", type=float, default=16.0)
    p.add_argument("--qmax", type=float, default=1000.0)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--samples", type=int, default=1, help="Random parameter points")
    p.add_argument("--expected", default=None, help="Reference exponent, a rational")
    p.add_argument("--tolerance", type=float, default=0.25)
    _add_csv_arg(p)

    p = sub.add_parser("dani", parents=[common], help="Systole trace of the Dani flow")
    _add_manifold_args(p)
    p.add_argument("--matrix", type=Path, help="JSON file with a real matrix (unweighted quasi-norms)")
    p.add_argument("--theta", type=float, default=None, help="Shorthand for the row (1, θ)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tmax", type=float, default=25.0)
    p.add_argument("--tpoints", type=int, default=26)
    p.add_argument("--radius", type=int, default=2)
    _add_csv_arg(p)

    p = sub.add_parser("heisenberg", parents=[common], help="Word-map minima in the Heisenberg group")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int, default=60)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--tuple", type=Path, default=None, help="JSON list of k (x, y, z) triples")
    _add_csv_arg(p)

    p = sub.add_parser("selftest", parents=[common], help="Run the acceptance criteria")
    p.add_argument("--quick", action="store_true", help="Reduced empirical scale")
    p.add_argument("--only", default=None, help="Comma-separated criterion numbers")

    sub.add_parser("families", parents=[common], help="List built-in manifold families")
    return parser


# =============================================================================
# Helpers
# =============================================================================


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise PreconditionError(f"no such file: {path}", "cli") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON in {path}: {e.msg}", "cli", path=f"line {e.lineno}") from e


def _algebra_arg(value: str) -> LieAlgebra:
    path = Path(value)
    if path.suffix == ".json" or path.is_file():
        return LieAlgebra.from_json(_read_json(path))
    return builtin_algebra(value)


def _int_list(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise PreconditionError(f"not a comma-separated list of integers: {value!r}", "cli") from e


def _family(args: argparse.Namespace, config: ExponentConfig) -> tuple[ManifoldFamily, dict[str, Any]]:
    """The manifold selected by --manifold or --family, and its echo for the report."""
    options = config.family_options()
    if getattr(args, "manifold", None) is not None:
        data = load_manifold(args.manifold)
        return create_manifold("explicit", {"manifold": data, **options}), {"manifold": data}
    if getattr(args, "family", None):
        get_family_class(args.family)
        params: dict[str, Any] = {name: getattr(args, name) for name in FAMILY_PARAMS if getattr(args, name) is not None}
        if args.algebra is not None:
            params["algebra"] = _algebra_arg(args.algebra)
        if args.cc_metric:
            params["riemannian"] = False
        echo = {k: (v.to_json() if isinstance(v, LieAlgebra) else v) for k, v in params.items()}
        return create_manifold(args.family, {**params, **options}), {"family": args.family, "parameters": echo}
    raise PreconditionError("need --manifold or --family", "cli")


def _command_echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}


def _report(args: argparse.Namespace, inputs: Any, results: Any, certificates=None, flags=None) -> Report:
    return Report(
        command=_command_echo(args),
        inputs=inputs,
        inputs_hash=inputs_hash(inputs),
        results=results,
        certificates=certificates or {},
        flags=sorted(set(flags or [])),
    )


def _write_csv(path: Path | None, text: str) -> bool:
    """Write CSV; True when it replaced the JSON report on stdout."""
    if path is None:
        return False
    if str(path) == "-":
        sys.stdout.write(text)
        return True
    path.write_text(text, encoding="utf-8")
    return False


def _rational_or_inf(value: Fraction | None) -> str:
    return format_rational(value) if value is not None else "inf"


# =============================================================================
# Commands
# =============================================================================


def cmd_exponent(args: argparse.Namespace, config: ExponentConfig) -> Report | None:
    family, inputs = _family(args, config)
    if args.emit:
        payload = family.manifold_json()
        validate_payload(payload, "manifold")
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return None
    result = family.tau(config.sampler(), args.strategy)
    qv, qe = family.source_norm(), family.target_norm()
    results: dict[str, Any] = {
        **result.to_json(),
        "extremal_value": format_rational(family.extremal_value()),
        "extremal": is_extremal(result, qv, qe),
    }
    flags = list(result.flags)
    if hasattr(family, "growth_exponent"):
        rf = family.relatively_free
        beta = family.beta(result.value)
        results["eta"] = family.growth_exponent()
        results["beta"] = _rational_or_inf(beta)
        results["quotient_dims"] = rf.quotient_dims
        flags.extend(rf.flags)
        closed = family.closed_form()
        if closed is not None:
            results["closed_form"] = closed.to_json()
            results["matches_closed_form"] = beta == closed.beta
    samples = results.pop("samples")
    return _report(args, inputs, results, {"seed": config.seed, "samples": samples}, flags)


def cmd_formula(args: argparse.Namespace, config: ExponentConfig) -> Report | None:
    fam = args.formula_family
    if fam == "veronese":
        if args.p is None or args.m is None:
            raise PreconditionError("veronese needs --p and --m", "cli")
        value = veronese_beta(args.p, args.m)
        inputs = {"family": fam, "p": args.p, "m": args.m}
        return _report(args, inputs, {"beta": format_rational(value), "beta_decimal": format_float(float(value))})
    if args.ks is not None:
        ks = _int_list(args.ks)
    elif args.k is not None:
        ks = [args.k]
    else:
        raise PreconditionError("need --k or --ks", "cli")
    names = {"s": "s", "d": "d", "d1": "d1", "d2": "d2", "dim_last": "dim_last"}
    params = {key: getattr(args, attr) for attr, key in names.items() if getattr(args, attr) is not None}
    rows = formula_table(fam, ks, **params)
    csv_lines = ["k,alpha,eta,beta,beta_decimal"]
    for row in rows:
        beta = row.to_json()
        csv_lines.append(f"{row.parameters['k']},{format_rational(row.alpha)},{row.eta},{beta['beta']},{beta['beta_decimal']}")
    if _write_csv(args.csv, "\n".join(csv_lines) + "\n"):
        return None
    results: Any = [row.to_json() for row in rows]
    if len(results) == 1:
        results = results[0]
    flags = [f for row in rows for f in row.flags]
    return _report(args, {"family": fam, "ks": ks, **params}, results, flags=flags)


def cmd_laws(args: argparse.Namespace, config: ExponentConfig) -> Report:
    g = _algebra_arg(args.algebra)
    s = args.s if args.s is not None else g.step
    rf = laws_ideal(g, args.k, s, config.sampler(), config.stabilize_rounds)
    results = rf.to_json()
    samples = results.pop("samples")
    results["graded_laws_dims"] = graded_laws_dims(rf)
    results["complement_words"] = [rf.basis.bracketed(rf.basis.words[j]) for j in complement_basis(rf)]
    inputs = {"algebra": g.to_json(), "k": args.k, "s": s}
    return _report(args, inputs, results, {"seed": config.seed, "samples": samples}, rf.flags)


def cmd_pencil_check(args: argparse.Namespace, config: ExponentConfig) -> Report:
    family, inputs = _family(args, config)
    qv = family.source_norm()
    if args.candidate is not None:
        labelled = dict(family.candidates())
        if args.candidate not in labelled:
            raise PreconditionError(
                f"unknown candidate '{args.candidate}'; available: {', '.join(labelled)}", "cli"
            )
        w = labelled[args.candidate]
    else:
        rows = _read_json(args.subspace)
        w = Subspace.span([[parse_rational(x) for x in row] for row in rows], qv.dim)
        inputs = {**inputs, "subspace": rows}
    if args.r is not None:
        p = unweighted_pencil(w, args.r)
    elif args.a is not None and args.b is not None:
        p = Pencil(w, parse_rational(args.a), parse_rational(args.b))
    else:
        raise PreconditionError("need --r, or both --a and --b", "cli")
    cert = family.contains(p, config.sampler())
    results = cert.to_json()
    samples = results.pop("samples")
    results.update(
        {
            "a": format_rational(p.a),
            "b": format_rational(p.b),
            "w": w.to_json(),
            "constraining": is_constraining(p, qv.dim, family.target_norm().dim),
        }
    )
    return _report(args, inputs, results, {"seed": config.seed, "samples": samples})


def _real_matrix(path: Path) -> tuple[np.ndarray, QuasiNorm, QuasiNorm]:
    x = np.atleast_2d(np.asarray(_read_json(path), dtype=np.float64))
    return x, QuasiNorm.uniform(x.shape[1], "source"), QuasiNorm.uniform(x.shape[0], "target")


def _fit_json(fit: SlopeFit, floor: Fraction | None) -> dict[str, Any]:
    return {**fit.to_json(), "minima": [format_float(m) for m in fit.minima], "dirichlet_floor": _rational_or_inf(floor)}


def cmd_empirical(args: argparse.Namespace, config: ExponentConfig) -> Report | None:
    rng = np.random.default_rng(config.seed)
    schedule = geometric_span(args.q0, args.qmax, args.points)
    if args.matrix is not None:
        x, qv, qe = _real_matrix(args.matrix)
        points, candidates = [x], [Subspace.full(qv.dim)]
        inputs: dict[str, Any] = {"matrix": x.tolist()}
    else:
        family, inputs = _family(args, config)
        qv, qe = family.source_norm(), family.target_norm()
        points = [family.sample_point(rng) for _ in range(args.samples)]
        candidates = [w for _, w in family.candidates()]
    fits, flags = [], []
    for i, x in enumerate(points):
        fit = estimate_beta(x, qv, qe, schedule, config.threads, config.box_guard)
        fits.append(_fit_json(fit, dirichlet_floor(x, candidates, qv, qe)))
        flags.extend(fit.flags)
        csv_path = args.csv
        if csv_path is not None and str(csv_path) != "-" and len(points) > 1:
            csv_path = csv_path.with_name(f"{csv_path.stem}_{i}{csv_path.suffix}")
        if _write_csv(csv_path, fit.to_csv()) and i == len(points) - 1:
            return None
    mean = float(np.mean([float(f["slope"]) for f in fits]))
    results: dict[str, Any] = {"fits": fits, "mean_slope": format_float(mean), "tolerance": args.tolerance}
    if args.expected is not None:
        expected = parse_rational(args.expected)
        within = abs(mean - float(expected)) <= args.tolerance
        results.update({"expected": format_rational(expected), "within_tolerance": within})
        if not within:
            flags.append("outside tolerance band")
    certificates = {"seed": config.seed, "points": [np.asarray(x).tolist() for x in points]}
    return _report(args, inputs, results, certificates, flags)


def cmd_dani(args: argparse.Namespace, config: ExponentConfig) -> Report | None:
    if args.theta is not None:
        x = np.array([[1.0, args.theta]])
        qv, qe = QuasiNorm.uniform(2, "source"), QuasiNorm.uniform(1, "target")
        inputs: dict[str, Any] = {"theta": args.theta}
    elif args.matrix is not None:
        x, qv, qe = _real_matrix(args.matrix)
        inputs = {"matrix": x.tolist()}
    else:
        family, inputs = _family(args, config)
        x = family.sample_point(np.random.default_rng(config.seed))
        qv, qe = family.source_norm(), family.target_norm()
    grid = [float(t) for t in np.linspace(0.0, args.tmax, args.tpoints)]
    trace = dani_systole(x, qv, qe, args.beta, grid, args.radius, config.rank_tol, config.mp_dps)
    if _write_csv(args.csv, trace.to_csv()):
        return None
    results = {**trace.to_json(), "times": [format_float(t) for t in trace.times], "systole": [format_float(s) for s in trace.systole]}
    return _report(args, inputs, results, {"seed": config.seed, "matrix": np.asarray(x).tolist()}, trace.flags)


def cmd_heisenberg(args: argparse.Namespace, config: ExponentConfig) -> Report | None:
    if args.tuple is not None:
        g_tuple = [tuple(float(v) for v in g) for g in _read_json(args.tuple)]
    else:
        rng = np.random.default_rng(config.seed)
        g_tuple = [tuple(float(v) for v in rng.uniform(-1.0, 1.0, 3)) for _ in range(args.k)]
    fit = heisenberg_word_min(g_tuple, args.k, args.bound, args.points, config.box_guard)
    if _write_csv(args.csv, fit.to_csv()):
        return None
    results = {
        **fit.to_json(),
        "minima": [format_float(m) for m in fit.minima],
        "reference_alpha": args.k * args.k - args.k - 2,
    }
    inputs = {"k": args.k, "bound": args.bound, "tuple": [list(g) for g in g_tuple]}
    return _report(args, inputs, results, {"seed": config.seed}, fit.flags)


def cmd_families(args: argparse.Namespace, config: ExponentConfig) -> Report:
    rows = []
    for family_id in get_supported_families():
        cls = get_family_class(family_id)
        rows.append(
            {
                "id": family_id,
                "name": cls.name,
                "default_strategy": cls.default_strategy.value,
                "strategies": [s.value for s in cls.strategies],
            }
        )
    return _report(args, {}, rows)


COMMANDS = {
    "exponent": cmd_exponent,
    "formula": cmd_formula,
    "laws": cmd_laws,
    "pencil-check": cmd_pencil_check,
    "empirical": cmd_empirical,
    "dani": cmd_dani,
    "heisenberg": cmd_heisenberg,
    "families": cmd_families,
}


# =============================================================================
# Entry point
# =============================================================================


def exit_code_for(error: DiophantineError) -> int:
    if isinstance(error, UniquenessViolationError):
        return EXIT_ESCALATED
    if isinstance(error, (ValidationError, GuardExceededError, UnsupportedError)):
        return EXIT_INVALID
    return EXIT_FAILED


def _emit(report: Report) -> None:
    payload = report.to_json()
    validate_payload(payload, "report")
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parse argv, run one command and print its report.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    config = get_exponent_config(
        seed=args.seed,
        threads=args.threads,
        log_level=args.log_level.upper() if args.log_level else None,
        log_levels=args.log_levels,
        strict=args.strict,
        initial_samples=args.initial_samples,
        stabilize_rounds=args.stabilize_rounds,
    )
    try:
        setup_logger(config.log_level, parse_module_levels(config.log_levels))
        logger.info("running %s", args.command)
        if args.command == "selftest":
            only = _int_list(args.only) if args.only else None
            passed, report = run_selftest(config.seed, args.quick, only, config.threads, config.family_options())
            _emit(report)
            return EXIT_OK if passed else EXIT_FAILED
        report = COMMANDS[args.command](args, config)
    except DiophantineError as e:
        logger.error("%s", e)
        print(json.dumps({"error": e.to_dict()}, indent=2, ensure_ascii=False))
        return exit_code_for(e)

    if report is None:
        return EXIT_OK
    _emit(report)
    if config.strict and any(flag in STRICT_FLAGS for flag in report.flags):
        logger.warning("strict mode: escalating %s", ", ".join(report.flags))
        return EXIT_ESCALATED
    logger.info("finished %s", args.command)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
