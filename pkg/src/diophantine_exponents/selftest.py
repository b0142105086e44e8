"""
Acceptance self-test.

Each criterion wires the exact machinery against an independent oracle
(Möbius counts, hook-content dimensions, closed-form exponents, Monte
Carlo slopes). Criteria are run in order and never abort the run: a
failure, including an exception, is recorded with its timing and
details.

Example:
    ```python
    from diophantine_exponents.selftest import run_selftest

    ok, report = run_selftest(seed=1, quick=True)
    report.results["criteria"][0]["passed"]   # True
    ```
"""

import itertools
import math
import time
from collections import Counter
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
import sympy

from diophantine_exponents.algebra import freelie, liealg
from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.base.types import Report, SlopeFit
from diophantine_exponents.common.exceptions import DiophantineError
from diophantine_exponents.common.logger import get_logger
from diophantine_exponents.common.utils import RationalSampler, format_float, format_rational, inputs_hash
from diophantine_exponents.empirical import dani, enumeration, remez
from diophantine_exponents.exponents import pencil, repthy
from diophantine_exponents.factory import create_manifold

logger = get_logger("selftest")

# Pairs (s, k) whose laws are computed exactly in the U_s cross-check.
LAWS_PAIRS = ((2, 2), (2, 3), (3, 3), (4, 3))
GROWTH_LAWS_PAIRS = tuple((s, k) for s in range(2, 5) for k in range(s - 1, 6) if k >= 2 and (s <= 3 or k <= 3))
DANI_FRACTION = 0.1
SLOPE_SLACK = 0.15
# Criterion 14 replays the others under fresh seeds: exact outputs must
# agree, empirical ones must stay inside their bands.
EXACT_CRITERIA = (1, 2, 3, 4, 5, 6, 7, 8)
EMPIRICAL_CRITERIA = (9, 10, 11, 12, 13)
SEED_STRIDE = 7919


@dataclass(frozen=True)
class SelftestScale:
    """Sizes of the empirical criteria."""

    veronese_qmax: float = 1e4
    veronese_points: int = 8
    veronese_samples: int = 10
    wedge_q0: float = 8.0
    wedge_points: int = 8
    wedge_samples: int = 5
    dani_samples: int = 10
    remez_forms: int = 20
    remez_n_mc: int = 20_000
    submodular_pairs: int = 100
    determinism_seeds: int = 5


FULL = SelftestScale()
QUICK = SelftestScale(
    veronese_qmax=1e3,
    veronese_samples=4,
    wedge_points=6,
    wedge_samples=2,
    dani_samples=4,
    remez_forms=6,
    remez_n_mc=5_000,
    submodular_pairs=20,
    determinism_seeds=2,
)


@dataclass
class SelftestContext:
    seed: int
    scale: SelftestScale = FULL
    threads: int = 1
    family_options: dict[str, Any] = field(default_factory=dict)
    # (label, slope, dirichlet floor) of every slope fitted so far
    fits: list[tuple[str, float, Fraction | None]] = field(default_factory=list)

    def sampler(self, offset: int = 0) -> RationalSampler:
        return RationalSampler(self.seed + offset)

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)

    def family(self, name: str, **params: Any):
        return create_manifold(name, {**params, **self.family_options})


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": format_float(self.seconds),
            "details": self.details,
        }


Check = Callable[[SelftestContext], tuple[bool, dict[str, Any]]]


# =============================================================================
# Exact criteria
# =============================================================================


def witt_oracle(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    mismatches = []
    for k in range(1, 6):
        counts = Counter(len(w) for w in freelie.lyndon_words(k, 6))
        for i in range(1, 7):
            if not counts[i] == freelie.witt_dim(k, i) == repthy.necklace_count(k, i):
                mismatches.append({"k": k, "i": i, "lyndon": counts[i], "mobius": repthy.necklace_count(k, i)})
    return not mismatches, {"mismatches": mismatches}


def weyl_vs_hook(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    mismatches, checked = [], 0
    for boxes in range(1, 7):
        for lam in repthy.young_diagrams(boxes):
            for k in range(1, 9):
                checked += 1
                a, b = repthy.weyl_dim(lam, k), repthy.hook_content_dim(lam, k)
                if a != b:
                    mismatches.append({"diagram": str(lam), "k": k, "weyl": a, "hook": b})
    return not mismatches, {"checked": checked, "mismatches": mismatches[:10]}


def us_laws_vanish(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    rows, ok = [], True
    for s, k in LAWS_PAIRS:
        rf = liealg.laws_ideal(liealg.u(s), k, s, ctx.sampler(s * 10 + k))
        ok &= rf.laws.dim == 0 and rf.quotient_dims == liealg.free_dims(k, s)
        rows.append({"s": s, "k": k, "laws": rf.laws.dim, "quotient_dims": rf.quotient_dims})
    return ok, {"pairs": rows}


def heisenberg_loop(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    rows, ok = [], True
    for k in (2, 3, 4):
        family = ctx.family("heisenberg", k=k)
        result = family.tau(ctx.sampler(k))
        expected = repthy.heisenberg_beta(k)
        beta = family.beta(result.value)
        eta = family.growth_exponent()
        ok &= result.value == expected.alpha and eta == expected.eta and beta == expected.beta
        rows.append(
            {
                "k": k,
                "tau": format_rational(result.value) if result.value is not None else "inf",
                "eta": eta,
                "beta": format_rational(beta) if beta is not None else "inf",
                "expected": format_rational(expected.beta),
            }
        )
    return ok, {"rows": rows}


def us_cross_check(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    mismatches = []
    for s in range(2, 5):
        for k in range(1, 6):
            witt = sum(i * freelie.witt_dim(k, i) for i in range(1, s + 1))
            if witt != repthy.mertens_growth(s, k):
                mismatches.append({"s": s, "k": k, "witt": witt, "mertens": repthy.mertens_growth(s, k)})
    for s, k in GROWTH_LAWS_PAIRS:
        rf = liealg.laws_ideal(liealg.u(s), k, s, ctx.sampler(100 + s * 10 + k))
        if liealg.growth_exponent(rf) != repthy.mertens_growth(s, k):
            mismatches.append({"s": s, "k": k, "laws": liealg.growth_exponent(rf)})
    beta = repthy.us_beta(3, 3).beta
    ok = not mismatches and beta == Fraction(7, 11)
    return ok, {"us_beta_3_3": format_rational(beta), "mismatches": mismatches}


def free_formulas(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    k = sympy.Symbol("k", positive=True, integer=True)
    expr = sympy.Rational(3, 4) * (sympy.binomial(k + 1, 3) - 4) / (k**3 + k**2 - k)
    mismatches = []
    for kk in range(3, 13):
        value = repthy.free_beta(3, 3, kk)
        symbolic = sympy.nsimplify(expr.subs(k, kk))
        if sympy.Rational(value.beta.numerator, value.beta.denominator) != symbolic:
            mismatches.append({"k": kk, "beta": format_rational(value.beta), "expected": str(symbolic)})
    limit = sympy.limit(sympy.expand_func(expr), k, sympy.oo)
    closed_limit = repthy.free_beta(3, 3, 3).limit
    ok = not mismatches and limit == sympy.Rational(1, 8) and closed_limit == Fraction(1, 8)
    return ok, {"limit": str(limit), "mismatches": mismatches}


def veronese_tau(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    family = ctx.family("veronese", p=3, s=2)
    result = family.tau(ctx.sampler(1))
    ok = result.value == Fraction(1) == repthy.veronese_beta(3, 2)
    rows = [{"p": 3, "s": 2, "tau": format_rational(result.value) if result.value is not None else "inf"}]
    for p in range(1, 4):
        family = ctx.family("veronese", p=p, s=p + 1)
        value = family.tau(ctx.sampler(p + 1)).value
        ok &= value == 0 == repthy.veronese_beta(p, p + 1)
        rows.append({"p": p, "s": p + 1, "tau": format_rational(value) if value is not None else "inf"})
    return ok, {"rows": rows}


def _random_subspace(rng: np.random.Generator, sampler: RationalSampler, n: int) -> Subspace:
    r = int(rng.integers(0, n + 1))
    if rng.random() < 0.5:
        return Subspace.coordinate(sorted(rng.choice(n, size=r, replace=False).tolist()), n)
    return Subspace.span(sampler.vectors(r, n), n)


def submodularity(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    counterexamples = []
    for name, params in (("heisenberg", {"k": 3}), ("veronese", {"p": 3, "s": 2})):
        family = ctx.family(name, **params)
        qv, qe = family.source_norm(), family.target_norm()
        points = family.generic_points(ctx.sampler(7))
        rng, vectors = ctx.rng(8), ctx.sampler(9)
        for _ in range(ctx.scale.submodular_pairs):
            w1, w2 = _random_subspace(rng, vectors, qv.dim), _random_subspace(rng, vectors, qv.dim)
            if not pencil.submodularity_check(family.poly_map(), qv, qe, w1, w2, points):
                counterexamples.append({"family": name, "w1": w1.to_json(), "w2": w2.to_json()})
    return not counterexamples, {"pairs": 2 * ctx.scale.submodular_pairs, "counterexamples": counterexamples}


# =============================================================================
# Empirical criteria
# =============================================================================


def _record(ctx: SelftestContext, label: str, fit: SlopeFit, floor: Fraction | None) -> None:
    ctx.fits.append((label, fit.slope, floor))


def sprindzuk_slope(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    qv, qe = pencil.QuasiNorm.uniform(3, "source"), pencil.QuasiNorm.uniform(1, "target")
    schedule = enumeration.geometric_span(16, ctx.scale.veronese_qmax, ctx.scale.veronese_points)
    rng = ctx.rng(9)
    slopes, good = [], 0
    for i in range(ctx.scale.veronese_samples):
        t = float(rng.uniform(-1.0, 1.0))
        x = np.array([[1.0, t, t * t]])
        fit = enumeration.estimate_beta(x, qv, qe, schedule, ctx.threads)
        floor = enumeration.dirichlet_floor(x, [w for _, w in pencil.flag_candidates([0, 1, 2], 3)], qv, qe)
        _record(ctx, f"veronese-row-{i}", fit, floor)
        slopes.append(fit.slope)
        good += fit.r2 >= enumeration.LOW_R2
    mean = float(np.mean(slopes))
    ok = 1.7 <= mean <= 2.3 and good >= math.ceil(0.8 * len(slopes))
    return ok, {"mean_slope": format_float(mean), "r2_ok": good, "slopes": [format_float(s) for s in slopes]}


def wedge_slope(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    family = ctx.family("wedge", k=4)
    qv, qe = family.source_norm(), family.target_norm()
    expected = float(family.extremal_value())
    schedule = enumeration.geometric_schedule(ctx.scale.wedge_q0, math.sqrt(2), ctx.scale.wedge_points)
    rng = ctx.rng(10)
    slopes = []
    for i in range(ctx.scale.wedge_samples):
        x = family.sample_point(rng)
        fit = enumeration.estimate_beta(x, qv, qe, schedule, ctx.threads)
        floor = enumeration.dirichlet_floor(x, [w for _, w in family.candidates()], qv, qe)
        _record(ctx, f"wedge-{i}", fit, floor)
        slopes.append(fit.slope)
    ok = all(abs(s - expected) <= 0.25 for s in slopes)
    return ok, {"extremal": format_float(expected), "slopes": [format_float(s) for s in slopes]}


def dani_correspondence(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    qv, qe = pencil.QuasiNorm.uniform(2, "source"), pencil.QuasiNorm.uniform(1, "target")
    grid = [float(t) for t in np.linspace(0.0, 25.0, 26)]
    rng = ctx.rng(11)
    agree = 0
    for _ in range(ctx.scale.dani_samples):
        x = np.array([[1.0, float(rng.uniform(0.1, 1.0))]])
        above = dani.dani_systole(x, qv, qe, 1.3, grid)
        below = dani.dani_systole(x, qv, qe, 0.7, grid)
        stays = min(above.systole) >= DANI_FRACTION * above.systole[0]
        dips = min(below.systole) < DANI_FRACTION * below.systole[0]
        agree += stays and dips
    ok = agree >= math.ceil(0.8 * ctx.scale.dani_samples)
    return ok, {"agree": agree, "samples": ctx.scale.dani_samples}


def dirichlet_floor_check(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    if not ctx.fits:
        return True, {"skipped": "no slopes fitted in this run"}
    below = [
        {"label": label, "slope": format_float(slope), "floor": format_rational(floor) if floor is not None else "inf"}
        for label, slope, floor in ctx.fits
        if floor is None or slope <= float(floor) - SLOPE_SLACK
    ]
    return not below, {"checked": len(ctx.fits), "below": below}


def remez_bound(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    rng = ctx.rng(13)
    failures, checked = [], 0
    for _ in range(ctx.scale.remez_forms):
        d = int(rng.integers(2, 7))
        pairs = list(itertools.combinations(range(d), 2))
        chosen = [pairs[i] for i in rng.choice(len(pairs), size=int(rng.integers(1, len(pairs) + 1)), replace=False)]
        coeffs = {pair: float(rng.choice([-1, 1]) * rng.uniform(0.1, 1.0)) for pair in chosen}
        for eps in (1e-1, 1e-2, 1e-3):
            checked += 1
            est = remez.level_estimate(coeffs, eps, ctx.scale.remez_n_mc, rng)
            if not est.within_bound:
                failures.append({"d": d, "eps": eps, "measure": format_float(est.measure), "bound": format_float(est.bound)})
    return not failures, {"checked": checked, "failures": failures}


def determinism(ctx: SelftestContext) -> tuple[bool, dict[str, Any]]:
    replays = []
    for i in range(1, ctx.scale.determinism_seeds + 1):
        replay = SelftestContext(ctx.seed + SEED_STRIDE * i, QUICK, ctx.threads, ctx.family_options)
        replays.append({n: run_criterion(n, name, check, replay) for n, name, check in CRITERIA if n != 14})
    first = replays[0]
    differing = [
        n
        for n in EXACT_CRITERIA
        if n in first and any((r[n].passed, r[n].details) != (first[n].passed, first[n].details) for r in replays[1:])
    ]
    failed = sorted({n for r in replays for n, result in r.items() if not result.passed})

    family = ctx.family("wedge", k=4)
    x = family.sample_point(ctx.rng(14))
    schedule = enumeration.geometric_schedule(4, math.sqrt(2), 6)
    qv, qe = family.source_norm(), family.target_norm()
    serial = enumeration.estimate_beta(x, qv, qe, schedule, threads=1)
    parallel = enumeration.estimate_beta(x, qv, qe, schedule, threads=4)
    same_fit = serial.minima == parallel.minima and serial.slope == parallel.slope
    ok = not differing and not failed and same_fit
    return ok, {
        "seeds": [ctx.seed + SEED_STRIDE * i for i in range(1, ctx.scale.determinism_seeds + 1)],
        "exact_differing": differing,
        "failed": failed,
        "empirical": [{str(n): r[n].passed for n in EMPIRICAL_CRITERIA if n in r} for r in replays],
        "parallel_identical": same_fit,
    }


CRITERIA: tuple[tuple[int, str, Check], ...] = (
    (1, "witt-oracle", witt_oracle),
    (2, "weyl-vs-hook", weyl_vs_hook),
    (3, "us-laws-vanish", us_laws_vanish),
    (4, "heisenberg-closed-loop", heisenberg_loop),
    (5, "us-cross-check", us_cross_check),
    (6, "free-nilpotent-formulas", free_formulas),
    (7, "veronese", veronese_tau),
    (8, "submodularity", submodularity),
    (9, "sprindzuk-slope", sprindzuk_slope),
    (10, "wedge-extremality", wedge_slope),
    (11, "dani-correspondence", dani_correspondence),
    (12, "dirichlet-floor", dirichlet_floor_check),
    (13, "remez-bound", remez_bound),
    (14, "determinism", determinism),
)


def run_criterion(number: int, name: str, check: Check, ctx: SelftestContext) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, details = check(ctx)
    except DiophantineError as e:
        passed, details = False, {"error": e.to_dict()}
    except Exception as e:  # noqa: BLE001 - recorded as a failed criterion
        passed, details = False, {"error": {"type": type(e).__name__, "message": str(e)}}
    seconds = time.perf_counter() - start
    log = logger.info if passed else logger.warning
    log("criterion %d %s: %s in %.2fs", number, name, "pass" if passed else "FAIL", seconds)
    return CriterionResult(number, name, bool(passed), seconds, details)


def run_selftest(
    seed: int = 20240601,
    quick: bool = False,
    only: list[int] | None = None,
    threads: int = 1,
    family_options: dict[str, Any] | None = None,
) -> tuple[bool, Report]:
    """
    Run the acceptance criteria.

    Args:
        seed: Base seed; every criterion derives its own streams from it
        quick: Use the reduced empirical scale
        only: Criterion numbers to run (default: all)
        threads: Enumeration threads
        family_options: Sampling options forwarded to every family

    Returns:
        (all passed, report)
    """
    ctx = SelftestContext(seed, QUICK if quick else FULL, threads, dict(family_options or {}))
    selected = [c for c in CRITERIA if only is None or c[0] in only]
    results = [run_criterion(number, name, check, ctx) for number, name, check in selected]
    passed = all(r.passed for r in results)
    inputs = {"seed": seed, "quick": quick, "only": only, "threads": threads}
    report = Report(
        command={"name": "selftest"},
        inputs=inputs,
        inputs_hash=inputs_hash(inputs),
        results={"passed": passed, "criteria": [r.to_json() for r in results]},
        certificates={"seed": seed, "scale": asdict(ctx.scale)},
        flags=[] if passed else [f"failed: {r.name}" for r in results if not r.passed],
    )
    return passed, report
