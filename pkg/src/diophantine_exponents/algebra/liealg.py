"""
Concrete rational nilpotent Lie algebras.

A LieAlgebra holds structure constants over Q. From it we derive the
lower central series, the evaluation matrix of the free nilpotent Lie
algebra at a tuple of elements, the ideal of rational laws on k letters,
the Bass–Guivarc'h growth exponent of the relatively free quotient and
the quasi-norm weights of a Carnot–Carathéodory metric.

Built-in constructors:
    heisenberg(n)  - 2n+1 dims, [x_i, y_i] = z
    u(s)           - strictly upper triangular (s+1)x(s+1) matrices
    free(d, s)     - free s-step nilpotent on d generators, Lyndon basis
    abelian(d)
"""

import logging
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Mapping, Sequence

from diophantine_exponents.algebra.freelie import FreeLieBasis, evaluate_words, lyndon_basis, witt_dim
from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace, intersect, kernel, rref
from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    InvalidStructureError,
    IrrationalLawsWarning,
    NotGeneratingError,
    SchemaError,
    UnsupportedError,
)
from diophantine_exponents.common.utils import RationalSampler, format_rational, parse_rational
from diophantine_exponents.schemas import validate_payload

logger = logging.getLogger(__name__)

Vector = tuple[Fraction, ...]
StructureConstant = tuple[int, int, int, Fraction]

# Laws whose RREF needs entries taller than this are reported, not trusted.
IRRATIONAL_HEIGHT = 10**6


# =============================================================================
# Lie algebras
# =============================================================================


@dataclass(frozen=True)
class LieAlgebra:
    """
    Finite-dimensional Lie algebra over Q given by structure constants.

    structure holds (i, j, k, c) with i < j, 0-based, meaning
    [e_i, e_j] has coefficient c on e_k. The table is validated
    (antisymmetry, Jacobi, nilpotency) on construction.
    """

    name: str
    dim: int
    names: tuple[str, ...]
    structure: tuple[StructureConstant, ...]
    metric: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, j, k, c in self.structure:
            for idx in (i, j, k):
                if not 0 <= idx < self.dim:
                    raise InvalidStructureError(f"index {idx} out of range", "liealg", triple=(i, j, k))
            if i == j:
                if c:
                    raise InvalidStructureError("[e_i, e_i] must vanish", "liealg", triple=(i, j, k))
                continue
            if i > j:
                raise InvalidStructureError("structure entries must have i < j", "liealg", triple=(i, j, k))
            if c:
                forward = table.setdefault((i, j), {})
                backward = table.setdefault((j, i), {})
                forward[k] = forward.get(k, Fraction(0)) + c
                backward[k] = backward.get(k, Fraction(0)) - c
        object.__setattr__(self, "_table", {key: tuple((k, c) for k, c in v.items() if c) for key, v in table.items()})
        self.validate()

    # --- Construction ---

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, Any]],
        name: str = "custom",
        names: Sequence[str] | None = None,
        metric: Mapping[str, Any] | None = None,
    ) -> "LieAlgebra":
        """
        Build from {(i, j): {k: c}} with 0-based indices in either order.

        Raises:
            InvalidStructureError: If (i, j) and (j, i) are both given and are not negatives
        """
        merged: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), out in brackets.items():
            out = {k: Fraction(c) for k, c in out.items() if Fraction(c)}
            if i == j:
                if out:
                    raise InvalidStructureError("[e_i, e_i] must vanish", "liealg", triple=(i, j, min(out)))
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            signed = {k: sign * c for k, c in out.items()}
            if key in merged and merged[key] != signed:
                raise InvalidStructureError("antisymmetry violated", "liealg", triple=key)
            merged[key] = signed
        structure = tuple(sorted((i, j, k, c) for (i, j), out in merged.items() for k, c in out.items()))
        labels = tuple(names) if names else tuple(f"e{i + 1}" for i in range(dim))
        return cls(name, dim, labels, structure, dict(metric or {}))

    # --- Brackets ---

    def bracket_basis(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self._table.get((i, j), ())  # type: ignore[attr-defined]

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatchError("vector not in g", "liealg", expected=self.dim, actual=len(u))
        out = [Fraction(0)] * self.dim
        nz_u = [(i, a) for i, a in enumerate(u) if a]
        nz_v = [(j, b) for j, b in enumerate(v) if b]
        for i, a in nz_u:
            for j, b in nz_v:
                for k, c in self.bracket_basis(i, j):
                    out[k] += a * b * c
        return tuple(out)

    def _basis_bracket_sparse(self, terms: Mapping[int, Fraction], j: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in terms.items():
            for k, c in self.bracket_basis(i, j):
                out[k] = out.get(k, Fraction(0)) + a * c
        return {k: c for k, c in out.items() if c}

    def validate(self) -> None:
        """
        Check the Jacobi identity on all basis triples.

        Raises:
            InvalidStructureError: With the offending triple
        """
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    total: dict[int, Fraction] = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = {t: x for t, x in self.bracket_basis(a, b)}
                        for t, x in self._basis_bracket_sparse(inner, c).items():
                            total[t] = total.get(t, Fraction(0)) + x
                    if any(total.values()):
                        raise InvalidStructureError("Jacobi identity fails", "liealg", triple=(i, j, k))

    # --- Lower central series ---

    @cached_property
    def lcs(self) -> tuple[Subspace, ...]:
        return tuple(lower_central_series(self))

    @property
    def step(self) -> int:
        return len(self.lcs) - 1

    def lcs_dims(self) -> list[int]:
        return [w.dim for w in self.lcs]

    # --- Serialization ---

    def to_json(self) -> dict[str, Any]:
        grouped: dict[tuple[int, int], list[dict[str, Any]]] = {}
        for i, j, k, c in self.structure:
            grouped.setdefault((i, j), []).append({"k": k + 1, "c": format_rational(c)})
        payload: dict[str, Any] = {
            "name": self.name,
            "dim": self.dim,
            "basis": list(self.names),
            "brackets": [{"i": i + 1, "j": j + 1, "out": out} for (i, j), out in sorted(grouped.items())],
        }
        if self.metric:
            payload["metric"] = dict(self.metric)
        return payload

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LieAlgebra":
        validate_payload(data, "lie_algebra")
        dim = int(data["dim"])
        brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
        for entry in data["brackets"]:
            out = brackets.setdefault((entry["i"] - 1, entry["j"] - 1), {})
            for term in entry["out"]:
                out[term["k"] - 1] = out.get(term["k"] - 1, Fraction(0)) + parse_rational(term["c"])
        names = data.get("basis")
        if names is not None and len(names) != dim:
            raise SchemaError("basis labels must match dim", "liealg", path="basis")
        return cls.from_brackets(dim, brackets, data.get("name", "custom"), names, data.get("metric"))


# =============================================================================
# Built-in algebras
# =============================================================================


def heisenberg(n: int = 1) -> LieAlgebra:
    """Heisenberg algebra of dimension 2n+1; n=1 gives [e1, e2] = e3."""
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + ["z"]
    if n == 1:
        names = ["e1", "e2", "e3"]
    brackets = {(i, n + i): {2 * n: 1} for i in range(n)}
    return LieAlgebra.from_brackets(2 * n + 1, brackets, "heisenberg" if n == 1 else f"heisenberg({n})", names)


def u(s: int) -> LieAlgebra:
    """
    Strictly upper triangular (s+1)x(s+1) matrices, step s.

    Basis E_ab (a < b) ordered by superdiagonal b-a, then by a, so the
    first s vectors span the superdiagonal.
    """
    n = s + 1
    pairs = sorted(((a, b) for a in range(n) for b in range(a + 1, n)), key=lambda p: (p[1] - p[0], p[0]))
    index = {p: i for i, p in enumerate(pairs)}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for (a, b), i in index.items():
        for (c, d), j in index.items():
            # [E_ab, E_cd] = δ_bc E_ad - δ_da E_cb
            if i < j:
                out: dict[int, int] = {}
                if b == c:
                    out[index[(a, d)]] = 1
                if d == a:
                    out[index[(c, b)]] = -1
                if out:
                    brackets[(i, j)] = out
    names = [f"E{a + 1}{b + 1}" for a, b in pairs]
    return LieAlgebra.from_brackets(len(pairs), brackets, f"u({s})", names, {"v1": [i + 1 for i in range(s)]})


def free(d: int, s: int) -> LieAlgebra:
    """Free s-step nilpotent Lie algebra on d generators in its Lyndon basis."""
    basis = lyndon_basis(d, s)
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, w in enumerate(basis.words):
        for j in range(i + 1, basis.dim):
            out = basis.bracket_words(w, basis.words[j])
            if out:
                brackets[(i, j)] = {basis.index(t): c for t, c in out.items()}
    names = [basis.bracketed(w) for w in basis.words]
    return LieAlgebra.from_brackets(basis.dim, brackets, f"free({d},{s})", names, {"v1": [i + 1 for i in range(d)]})


def abelian(d: int) -> LieAlgebra:
    return LieAlgebra.from_brackets(d, {}, f"abelian({d})")


_BUILTIN = re.compile(r"^\s*(heisenberg|u|free|abelian)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def builtin_algebra(spec: str) -> LieAlgebra:
    """
    Parse "heisenberg", "heisenberg(2)", "u(3)", "free(3,3)", "abelian(2)".

    Raises:
        UnsupportedError: If the name is not a built-in
    """
    match = _BUILTIN.match(spec)
    if not match:
        raise UnsupportedError(f"Unknown built-in Lie algebra '{spec}'", "liealg")
    kind, raw = match.group(1), match.group(2)
    args = [int(a) for a in raw.split(",") if a.strip()] if raw else []
    try:
        if kind == "heisenberg":
            return heisenberg(*args)
        if kind == "u":
            return u(*args)
        if kind == "free":
            return free(*args)
        return abelian(*args)
    except TypeError as e:
        raise UnsupportedError(f"Bad arguments for '{spec}'", "liealg") from e


# =============================================================================
# Operations
# =============================================================================


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    """
    g = g^(1) ⊇ g^(2) ⊇ … ⊇ 0 with g^(i+1) = [g, g^(i)].

    Raises:
        InvalidStructureError: If the series stabilizes above 0
    """
    series = [Subspace.full(g.dim)]
    while not series[-1].is_zero():
        current = series[-1]
        products = []
        for v in current.vectors():
            terms = {i: x for i, x in enumerate(v) if x}
            for j in range(g.dim):
                out = g._basis_bracket_sparse(terms, j)
                if out:
                    products.append([out.get(t, Fraction(0)) for t in range(g.dim)])
        nxt = Subspace.span(products, g.dim)
        if nxt == current:
            raise InvalidStructureError("lower central series stabilizes above 0: not nilpotent", "liealg.lcs")
        series.append(nxt)
    return series


def eval_matrix(g: LieAlgebra, basis: FreeLieBasis, values: Sequence[Sequence[Fraction]]) -> QMatrix:
    """(dim g) x (dim F_{k,s}) matrix whose column for word w is w(X_1, …, X_k)."""
    word_values = evaluate_words(basis, g, values)
    return QMatrix.from_columns([word_values[w] for w in basis.words], g.dim)


def split_tuple(flat: Sequence[Fraction], k: int, dim: int) -> list[tuple[Fraction, ...]]:
    """Cut a flat parameter vector into k elements of g."""
    if len(flat) != k * dim:
        raise DimensionMismatchError("parameter vector length", "liealg", expected=k * dim, actual=len(flat))
    return [tuple(flat[i * dim : (i + 1) * dim]) for i in range(k)]


@dataclass
class RelativelyFree:
    """Laws ideal on k letters and the dimensions of F_{k,g} = F_{k,s} / laws."""

    k: int
    s: int
    basis: FreeLieBasis
    laws: Subspace
    quotient_dims: list[int]
    samples: list[list[Fraction]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def quotient_dim(self, i: int) -> int:
        """dim F^{[i]}_{k,g} (1-based degree)."""
        return self.quotient_dims[i - 1]

    @property
    def dim(self) -> int:
        return sum(self.quotient_dims)

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "s": self.s,
            "quotient_dims": self.quotient_dims,
            "laws": self.laws.to_json(),
            "growth_exponent": growth_exponent(self),
            "samples": [[format_rational(x) for x in t] for t in self.samples],
            "flags": self.flags,
        }


def laws_ideal(
    g: LieAlgebra,
    k: int,
    s: int,
    sampler: RationalSampler,
    stabilize_rounds: int = 3,
) -> RelativelyFree:
    """
    Rational laws of g on k letters in degrees <= s.

    Each degree is handled separately: the degree-i laws are the common
    kernel of the degree-i evaluation columns over random tuples. Tuples
    are drawn until the ranks of all degrees are unchanged for
    `stabilize_rounds` consecutive fresh tuples. A non-generic tuple can
    only enlarge the computed kernel, never shrink it.

    Example:
        ```python
        rf = laws_ideal(u(3), 3, 3, RationalSampler(seed=1))
        rf.laws.dim        # 0
        rf.quotient_dims   # [3, 3, 8]
        ```
    """
    basis = lyndon_basis(k, s)
    slices = [basis.degree_slice(i) for i in range(1, s + 1)]
    equations: list[list[list[Fraction]]] = [[] for _ in slices]
    ranks = [0] * len(slices)
    samples: list[list[Fraction]] = []
    unchanged = 0
    while unchanged < stabilize_rounds:
        flat = sampler.vector(k * g.dim)
        samples.append(flat)
        m = eval_matrix(g, basis, split_tuple(flat, k, g.dim))
        new_ranks = []
        for d, cols in enumerate(slices):
            rows = equations[d] + [[r[c] for c in cols] for r in m.row_list()]
            reduced, _ = rref(rows, len(cols))
            equations[d] = reduced
            new_ranks.append(len(reduced))
        unchanged = unchanged + 1 if new_ranks == ranks else 0
        ranks = new_ranks
        logger.debug("laws_ideal sample %d ranks %s", len(samples), ranks)

    law_vectors: list[list[Fraction]] = []
    for d, cols in enumerate(slices):
        if not cols:
            continue
        local = kernel(QMatrix.from_rows(equations[d], len(cols))) if equations[d] else Subspace.full(len(cols))
        for v in local.vectors():
            full = [Fraction(0)] * basis.dim
            for c, x in zip(cols, v):
                full[c] = x
            law_vectors.append(full)
    laws = Subspace.span(law_vectors, basis.dim)
    # rank of the degree-i evaluation = dim F^{[i]}_{k,g}
    quotient_dims = list(ranks)
    flags = []
    height = max((max(abs(x.numerator), x.denominator) for x in laws.basis.entries), default=0)
    if height > IRRATIONAL_HEIGHT:
        flags.append("possible irrational laws")
        warnings.warn(f"laws of {g.name} on {k} letters have height {height}", IrrationalLawsWarning, stacklevel=2)
    return RelativelyFree(k, s, basis, laws, quotient_dims, samples, flags)


def graded_laws_dims(rf: RelativelyFree) -> list[int]:
    """dim(laws ∩ degree-i slice) for i = 1..s."""
    return [
        intersect(rf.laws, Subspace.coordinate(rf.basis.degree_slice(i), rf.basis.dim)).dim
        for i in range(1, rf.s + 1)
    ]


def complement_basis(rf: RelativelyFree) -> list[int]:
    """
    Word indices whose classes form a basis of the quotient F_{k,g}.

    These are the non-pivot columns of the laws RREF, so the span of the
    chosen words is a complement of the laws in every degree.
    """
    pivots = set(rf.laws.pivots())
    return [j for j in range(rf.basis.dim) if j not in pivots]


def growth_exponent(rf: RelativelyFree) -> int:
    """Bass–Guivarc'h exponent Σ i · dim F^{[i]}_{k,g}."""
    return sum(i * d for i, d in enumerate(rf.quotient_dims, start=1))


def free_dims(k: int, s: int) -> list[int]:
    return [witt_dim(k, i) for i in range(1, s + 1)]


# =============================================================================
# Metric weights
# =============================================================================


@dataclass(frozen=True)
class MetricWeights:
    """Generating flag V^1 ⊆ … ⊆ V^s = g and per-basis-direction weights."""

    generating_flag: tuple[Subspace, ...]
    weights: tuple[Fraction, ...]
    riemannian: bool = False

    def target_order(self) -> list[int]:
        """Basis indices sorted by non-increasing weight (stable)."""
        return sorted(range(len(self.weights)), key=lambda i: -self.weights[i])

    def sorted_weights(self) -> list[Fraction]:
        return [self.weights[i] for i in self.target_order()]


def metric_weights(g: LieAlgebra, v1: Subspace | None = None, riemannian: bool = False) -> MetricWeights:
    """
    Flag V^{i+1} = V^i + [V^1, V^i] and the weight of each basis direction.

    The weight of e_j is the smallest i with e_j in V^i; the Riemannian
    variant returns all weights 1.

    Raises:
        NotGeneratingError: If the flag does not reach g
    """
    if riemannian:
        full = Subspace.full(g.dim)
        return MetricWeights((full,), tuple(Fraction(1) for _ in range(g.dim)), True)
    if v1 is None:
        raise NotGeneratingError("v1 required for a Carnot–Carathéodory metric", "liealg.metric_weights")
    flag = [v1]
    while flag[-1].dim < g.dim:
        current = flag[-1]
        products = [g.bracket(a, b) for a in v1.vectors() for b in current.vectors()]
        nxt = current + Subspace.span(products, g.dim) if products else current
        if nxt == current:
            raise NotGeneratingError(f"v1 generates only a {current.dim}-dim subalgebra", "liealg.metric_weights")
        flag.append(nxt)
    weights = []
    for j in range(g.dim):
        e_j = [1 if t == j else 0 for t in range(g.dim)]
        weights.append(Fraction(next(i for i, member in enumerate(flag, start=1) if member.contains_vector(e_j))))
    return MetricWeights(tuple(flag), tuple(weights))


def algebra_metric(g: LieAlgebra) -> MetricWeights:
    """Metric weights declared in g.metric (default Riemannian)."""
    if not g.metric or g.metric.get("riemannian"):
        return metric_weights(g, riemannian=True)
    v1 = Subspace.coordinate([i - 1 for i in g.metric["v1"]], g.dim)
    return metric_weights(g, v1)
