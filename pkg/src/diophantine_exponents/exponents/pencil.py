"""
Weighted volume functions, pencils and the ratio maximizer.

For a linear map x: V -> E with V, E carrying weighted quasi-norms,
ψ(W) and φ(F) are the volume-growth exponents of a subspace W ≤ V and
F ≤ E. Over a parametrized family x = Φ(p) with rational polynomial
entries, ψ_M(W) = min ψ(W ∩ ker x) and φ_M(W) = max φ(xW) are attained
at generic parameters. The almost-sure exponent of a rationally defined
family is the maximum of ψ_M/φ_M, computed here over a finite candidate
family of rational subspaces.

Coordinate conventions:
    source bases are ordered by non-increasing weight, V_{i+1} = span(u_1..u_i);
    target bases are ordered by non-increasing weight, V'_i = span(u'_{i+1}..u'_e).
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Protocol, Sequence

import numpy as np
import sympy

from diophantine_exponents.algebra.qlinalg import (
    QMatrix,
    Subspace,
    coordinate_dims,
    determinant,
    intersect,
    kernel,
    rref,
    subspace_sum,
)
from diophantine_exponents.base.types import CandidateRow, Flag, Side, TauResult
from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    SchemaError,
    UniquenessViolationError,
)
from diophantine_exponents.common.utils import RationalSampler, format_rational, parse_rational

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Polynomial = tuple[tuple[Fraction, Monomial], ...]


# =============================================================================
# Quasi-norms and volume functions
# =============================================================================


@dataclass(frozen=True)
class QuasiNorm:
    """Weighted sup quasi-norm max |u_i*(v)|^{1/α_i} with α_1 >= … >= α_d > 0."""

    dim: int
    weights: tuple[Fraction, ...]
    side: Side

    def __post_init__(self) -> None:
        if len(self.weights) != self.dim:
            raise DimensionMismatchError("one weight per coordinate", "pencil.QuasiNorm", expected=self.dim, actual=len(self.weights))
        if any(w <= 0 for w in self.weights):
            raise PreconditionError("weights must be positive", "pencil.QuasiNorm")
        if any(a < b for a, b in zip(self.weights, self.weights[1:])):
            raise PreconditionError("weights must be sorted non-increasing", "pencil.QuasiNorm")

    @classmethod
    def of(cls, weights: Iterable[Any], side: Side | str) -> "QuasiNorm":
        ws = tuple(parse_rational(w) if isinstance(w, str) else Fraction(w) for w in weights)
        return cls(len(ws), ws, Side(side))

    @classmethod
    def uniform(cls, dim: int, side: Side | str) -> "QuasiNorm":
        return cls(dim, (Fraction(1),) * dim, Side(side))

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def is_uniform(self) -> bool:
        return all(w == 1 for w in self.weights)

    def _gaps(self) -> list[Fraction]:
        """α_i - α_{i+1} with α_{d+1} = 0."""
        return [a - b for a, b in zip(self.weights, self.weights[1:] + (Fraction(0),))]

    def flag(self) -> list[Subspace]:
        """The coordinate flag: ascending prefixes (source) or descending suffixes (target)."""
        if self.side is Side.SOURCE:
            return [Subspace.coordinate(range(i), self.dim) for i in range(self.dim + 1)]
        return [Subspace.coordinate(range(i, self.dim), self.dim) for i in range(self.dim + 1)]

    def to_json(self) -> list[str]:
        return [format_rational(w) for w in self.weights]


def _check_side(q: QuasiNorm, side: Side, w: Subspace) -> None:
    if q.side is not side:
        raise PreconditionError(f"expected a {side.value} quasi-norm", "pencil")
    if w.ambient_dim != q.dim:
        raise DimensionMismatchError("subspace and quasi-norm dimensions differ", "pencil", expected=q.dim, actual=w.ambient_dim)


def psi(w: Subspace, q: QuasiNorm) -> Fraction:
    """
    ψ(W) = Σ_{i in I(W)} α_i = Σ_i (α_i - α_{i+1}) dim(V_{i+1} ∩ W).

    Example:
        ```python
        q = QuasiNorm.of([2, 1, 1], "source")
        psi(Subspace.coordinate([0], 3), q)   # 2
        ```
    """
    _check_side(q, Side.SOURCE, w)
    dims = coordinate_dims(w, list(range(q.dim)))
    return sum((gap * dims[i + 1] for i, gap in enumerate(q._gaps())), Fraction(0))


def phi(f: Subspace, q: QuasiNorm) -> Fraction:
    """φ(F) = Σ_{i in J(F)} α'_i = Σ_i (α'_i - α'_{i+1})(dim F - dim(V'_i ∩ F))."""
    _check_side(q, Side.TARGET, f)
    e = q.dim
    suffix = coordinate_dims(f, list(range(e - 1, -1, -1)))  # suffix[L] = dim(F ∩ last L coords)
    return sum((gap * (f.dim - suffix[e - i - 1]) for i, gap in enumerate(q._gaps())), Fraction(0))


def psi_index_set(w: Subspace, q: QuasiNorm) -> list[int]:
    """I(W): 1-based i with dim(W ∩ V_{i+1}) = dim(W ∩ V_i) + 1."""
    _check_side(q, Side.SOURCE, w)
    dims = coordinate_dims(w, list(range(q.dim)))
    return [i for i in range(1, q.dim + 1) if dims[i] > dims[i - 1]]


def phi_index_set(f: Subspace, q: QuasiNorm) -> list[int]:
    """J(F): 1-based i with dim(F ∩ V'_i) < dim(F ∩ V'_{i-1})."""
    _check_side(q, Side.TARGET, f)
    e = q.dim
    suffix = coordinate_dims(f, list(range(e - 1, -1, -1)))
    return [i for i in range(1, e + 1) if suffix[e - i] < suffix[e - i + 1]]


# =============================================================================
# Polynomial maps
# =============================================================================


class ParametrizedMap(Protocol):
    """Anything that evaluates to a dim_e x dim_v matrix at a parameter point."""

    n_params: int
    dim_v: int
    dim_e: int

    def evaluate(self, params: Sequence[Fraction]) -> QMatrix: ...

    def evaluate_float(self, params: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class PolyMap:
    """
    Φ: Q^{n_params} -> Hom(V, E) with rational polynomial entries.

    entries[r][c] is a tuple of (coefficient, exponent vector) terms.
    """

    n_params: int
    dim_v: int
    dim_e: int
    entries: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim_e or any(len(r) != self.dim_v for r in self.entries):
            raise DimensionMismatchError("entries must be dim_e x dim_v", "pencil.PolyMap")
        for row in self.entries:
            for poly in row:
                for _, exps in poly:
                    if len(exps) != self.n_params:
                        raise SchemaError("exponent vector length must equal n_params", "pencil.PolyMap")

    @classmethod
    def from_sympy(cls, matrix: Sequence[Sequence[Any]], symbols: Sequence[sympy.Symbol]) -> "PolyMap":
        """Build from a matrix of sympy expressions polynomial in `symbols`."""
        entries = []
        for row in matrix:
            out_row = []
            for expr in row:
                expr = sympy.expand(sympy.sympify(expr))
                if expr == 0:
                    out_row.append(())
                    continue
                if not symbols:
                    out_row.append(((Fraction(str(sympy.Rational(expr))), ()),))
                    continue
                terms = sympy.Poly(expr, *symbols, domain="QQ").terms()
                out_row.append(
                    tuple((Fraction(int(c.p), int(c.q)), tuple(m)) for m, c in terms)
                )
            entries.append(tuple(out_row))
        dim_v = len(matrix[0]) if matrix else 0
        return cls(len(symbols), dim_v, len(matrix), tuple(entries))

    @classmethod
    def constant(cls, m: QMatrix) -> "PolyMap":
        zero: Monomial = ()
        return cls(0, m.cols, m.rows, tuple(tuple(((x, zero),) if x else () for x in r) for r in m.row_list()))

    def evaluate(self, params: Sequence[Fraction]) -> QMatrix:
        if len(params) != self.n_params:
            raise DimensionMismatchError("parameter count", "pencil.PolyMap", expected=self.n_params, actual=len(params))
        cache: dict[Monomial, Fraction] = {}

        def mono(exps: Monomial) -> Fraction:
            if exps not in cache:
                value = Fraction(1)
                for p, e in zip(params, exps):
                    if e:
                        value *= p**e
                cache[exps] = value
            return cache[exps]

        return QMatrix.from_rows(
            [[sum((c * mono(m) for c, m in poly), Fraction(0)) for poly in row] for row in self.entries],
            self.dim_v,
        )

    def evaluate_float(self, params: np.ndarray) -> np.ndarray:
        out = np.zeros((self.dim_e, self.dim_v))
        for r, row in enumerate(self.entries):
            for c, poly in enumerate(row):
                out[r, c] = sum(float(coef) * float(np.prod(np.power(params, m))) for coef, m in poly)
        return out

    def to_json(self) -> list[list[list[dict[str, Any]]]]:
        return [
            [[{"coeff": format_rational(c), "exps": list(m)} for c, m in poly] for poly in row]
            for row in self.entries
        ]

    @classmethod
    def from_json(cls, n_params: int, dim_v: int, dim_e: int, data: Sequence[Any]) -> "PolyMap":
        entries = tuple(
            tuple(tuple((parse_rational(t["coeff"]), tuple(t["exps"])) for t in poly) for poly in row) for row in data
        )
        return cls(n_params, dim_v, dim_e, entries)


# =============================================================================
# Generic points
# =============================================================================


@dataclass
class GenericPoints:
    """
    Lazily drawn rational parameter points and their matrices.

    Generic values are read off by stabilization: start with
    `initial` points, keep drawing until the reduced value is unchanged
    for `rounds` consecutive fresh points. Points are shared between all
    subspaces evaluated against the same family.
    """

    phi_map: ParametrizedMap
    sampler: RationalSampler
    initial: int = 5
    rounds: int = 3
    params: list[list[Fraction]] = field(default_factory=list)
    matrices: list[QMatrix] = field(default_factory=list)
    _kernels: dict[int, Subspace] = field(default_factory=dict)

    def point(self, i: int) -> QMatrix:
        while len(self.matrices) <= i:
            p = self.sampler.vector(self.phi_map.n_params)
            self.params.append(p)
            self.matrices.append(self.phi_map.evaluate(p))
        return self.matrices[i]

    def kernel(self, i: int) -> Subspace:
        if i not in self._kernels:
            self._kernels[i] = kernel(self.point(i))
        return self._kernels[i]

    def stabilized(self, value_at: Any, better: Any) -> tuple[Fraction, int]:
        """
        Reduce value_at(i) over points with `better(new, old)` deciding replacement.

        Returns:
            (stabilized value, number of points consumed)
        """
        best = value_at(0)
        for i in range(1, self.initial):
            v = value_at(i)
            if better(v, best):
                best = v
        i, unchanged = self.initial, 0
        while unchanged < self.rounds:
            v = value_at(i)
            if better(v, best):
                best, unchanged = v, 0
            else:
                unchanged += 1
            i += 1
        return best, i

    @property
    def used(self) -> list[list[Fraction]]:
        return list(self.params)


def _points(phi_map: ParametrizedMap, sampler: "RationalSampler | GenericPoints") -> GenericPoints:
    if isinstance(sampler, GenericPoints):
        if sampler.phi_map is not phi_map:
            raise PreconditionError("generic points belong to another map", "pencil")
        return sampler
    return GenericPoints(phi_map, sampler)


def _check_map(phi_map: ParametrizedMap, qv: QuasiNorm, qe: QuasiNorm) -> None:
    if qv.dim != phi_map.dim_v or qe.dim != phi_map.dim_e:
        raise DimensionMismatchError("quasi-norms do not match the map's shape", "pencil")
    if qv.side is not Side.SOURCE or qe.side is not Side.TARGET:
        raise PreconditionError("need a source and a target quasi-norm", "pencil")


def psi_M(w: Subspace, phi_map: ParametrizedMap, qv: QuasiNorm, sampler: "RationalSampler | GenericPoints") -> Fraction:
    """Generic min of ψ(W ∩ ker Φ(p)); can only over-estimate before stabilization."""
    if w.is_zero():
        return Fraction(0)
    pts = _points(phi_map, sampler)
    value, _ = pts.stabilized(lambda i: psi(intersect(w, pts.kernel(i)), qv), lambda new, old: new < old)
    return value


def phi_M(w: Subspace, phi_map: ParametrizedMap, qe: QuasiNorm, sampler: "RationalSampler | GenericPoints") -> Fraction:
    """Generic max of φ(Φ(p)W); can only under-estimate before stabilization."""
    if w.is_zero():
        return Fraction(0)
    pts = _points(phi_map, sampler)
    value, _ = pts.stabilized(lambda i: phi(w.image(pts.point(i)), qe), lambda new, old: new > old)
    return value


# =============================================================================
# Pencils
# =============================================================================


@dataclass(frozen=True)
class Pencil:
    """P_{W,a,b} = {x : ψ(ker x ∩ W) >= a and φ(xW) <= b}."""

    w: Subspace
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise PreconditionError("pencil thresholds must be non-negative", "pencil.Pencil")

    def validate(self, qv: QuasiNorm) -> None:
        if self.a > psi(self.w, qv):
            raise PreconditionError("a exceeds ψ(W)", "pencil.Pencil")


def unweighted_pencil(w: Subspace, r: int) -> Pencil:
    """The classical pencil {x : dim xW <= r} as P_{W, dim W - r, r}."""
    if r < 0:
        raise PreconditionError("r must be non-negative", "pencil.unweighted_pencil")
    return Pencil(w, Fraction(max(w.dim - r, 0)), Fraction(r))


def is_constraining(p: Pencil, dim_v: int, dim_e: int) -> bool:
    """dim W / r > dim V / dim E for an unweighted pencil (r = b)."""
    if p.b == 0:
        return p.w.dim > 0
    return Fraction(p.w.dim) / p.b > Fraction(dim_v, dim_e)


@dataclass
class PencilCertificate:
    contained: bool
    psi_M: Fraction
    phi_M: Fraction
    samples: list[list[Fraction]]

    def __bool__(self) -> bool:
        return self.contained

    def to_json(self) -> dict[str, Any]:
        return {
            "contained": self.contained,
            "psi_M": format_rational(self.psi_M),
            "phi_M": format_rational(self.phi_M),
            "samples": [[format_rational(x) for x in s] for s in self.samples],
        }


def pencil_contains(
    phi_map: ParametrizedMap,
    p: Pencil,
    qv: QuasiNorm,
    qe: QuasiNorm,
    sampler: "RationalSampler | GenericPoints",
) -> PencilCertificate:
    """M ⊂ P_{W,a,b} iff ψ_M(W) >= a and φ_M(W) <= b."""
    _check_map(phi_map, qv, qe)
    p.validate(qv)
    pts = _points(phi_map, sampler)
    a, b = psi_M(p.w, phi_map, qv, pts), phi_M(p.w, phi_map, qe, pts)
    return PencilCertificate(a >= p.a and b <= p.b, a, b, pts.used)


def dirichlet_bound(x: QMatrix, w: Subspace, qv: QuasiNorm, qe: QuasiNorm) -> Fraction | None:
    """
    ψ(W ∩ ker x)/φ(xW), a lower bound for the exponent of x.

    Returns None for +∞ (φ(xW) = 0 < ψ); 0 for W = 0.
    """
    if x.rows != qe.dim or x.cols != qv.dim:
        raise DimensionMismatchError("matrix shape does not match quasi-norms", "pencil.dirichlet_bound")
    if w.is_zero():
        return Fraction(0)
    a = psi(intersect(w, kernel(x)), qv)
    b = phi(w.image(x), qe)
    if b == 0:
        return None if a > 0 else Fraction(0)
    return a / b


def extremal_value(qv: QuasiNorm, qe: QuasiNorm) -> Fraction:
    """(Σα - Σα')/Σα': the exponent of Lebesgue-almost every x in Hom(V, E)."""
    return (qv.total - qe.total) / qe.total


# =============================================================================
# Candidates and the ratio maximizer
# =============================================================================


def graded_candidates(grading: Sequence[int]) -> list[tuple[str, Subspace]]:
    """All nonzero direct sums of graded slices; grading[i] is the degree of coordinate i."""
    n = len(grading)
    degrees = sorted(set(grading))
    out = []
    for size in range(1, len(degrees) + 1):
        for chosen in itertools.combinations(degrees, size):
            coords = [i for i in range(n) if grading[i] in chosen]
            out.append(("+".join(f"deg{d}" for d in chosen), Subspace.coordinate(coords, n)))
    return out


def flag_candidates(order: Sequence[int], n: int) -> list[tuple[str, Subspace]]:
    """Prefixes span(e_{order[0]}, …, e_{order[i]}) of a coordinate order."""
    return [(f"flag{i}", Subspace.coordinate(order[: i + 1], n)) for i in range(len(order))]


def tau_candidates(
    phi_map: ParametrizedMap,
    qv: QuasiNorm,
    qe: QuasiNorm,
    candidates: Sequence[Subspace | tuple[str, Subspace]],
    sampler: "RationalSampler | GenericPoints",
) -> TauResult:
    """
    max ψ_M(W)/φ_M(W) over candidates, with the maximal-dimension argmax as witness.

    Raises:
        PreconditionError: If candidates is empty
        UniquenessViolationError: If two distinct argmaxes share the maximal dimension
    """
    _check_map(phi_map, qv, qe)
    if not candidates:
        raise PreconditionError("candidate family is empty", "pencil.tau_candidates")
    pts = _points(phi_map, sampler)

    rows: list[tuple[CandidateRow, Subspace]] = []
    seen: set[Subspace] = set()
    for i, cand in enumerate(candidates):
        label, w = cand if isinstance(cand, tuple) else (f"W{i}", cand)
        if w.ambient_dim != qv.dim:
            raise DimensionMismatchError("candidate not in V", "pencil.tau_candidates", expected=qv.dim, actual=w.ambient_dim)
        if w in seen:
            continue
        seen.add(w)
        row = CandidateRow(label, w.dim, psi_M(w, phi_map, qv, pts), phi_M(w, phi_map, qe, pts))
        logger.debug("candidate %s dim=%d psi_M=%s phi_M=%s", label, w.dim, row.psi, row.phi)
        rows.append((row, w))

    infinite = [(r, w) for r, w in rows if r.ratio is None]
    flags: list[str] = []
    if infinite:
        pool = infinite
        value = None
        flags.append(Flag.INFINITE.value)
    else:
        value = max(r.ratio for r, _ in rows)  # type: ignore[type-var]
        pool = [(r, w) for r, w in rows if r.ratio == value]
    top = max(r.dim for r, _ in pool)
    winners = [(r, w) for r, w in pool if r.dim == top]
    if len(winners) > 1:
        raise UniquenessViolationError(
            f"{len(winners)} distinct maximizers of dimension {top}",
            "pencil.tau_candidates",
            dimension=top,
            value=format_rational(value) if value is not None else "inf",
        )
    row, witness = winners[0]
    logger.info("tau = %s witnessed by %s (dim %d)", value if value is not None else "inf", row.label, row.dim)
    return TauResult(value, witness, row.psi, row.phi, pts.used, [r for r, _ in rows], flags)


def is_extremal(result: TauResult, qv: QuasiNorm, qe: QuasiNorm) -> bool:
    """True iff τ equals the Lebesgue value of Hom(V, E)."""
    return result.value is not None and result.value == extremal_value(qv, qe)


def submodularity_check(
    phi_map: ParametrizedMap,
    qv: QuasiNorm,
    qe: QuasiNorm,
    w1: Subspace,
    w2: Subspace,
    sampler: "RationalSampler | GenericPoints",
) -> bool:
    """φ_M(sum)+φ_M(∩) <= φ_M(w1)+φ_M(w2) and ψ_M(sum)+ψ_M(∩) >= ψ_M(w1)+ψ_M(w2)."""
    _check_map(phi_map, qv, qe)
    pts = _points(phi_map, sampler)
    total, common = subspace_sum(w1, w2), intersect(w1, w2)
    phis = [phi_M(w, phi_map, qe, pts) for w in (total, common, w1, w2)]
    psis = [psi_M(w, phi_map, qv, pts) for w in (total, common, w1, w2)]
    return phis[0] + phis[1] <= phis[2] + phis[3] and psis[0] + psis[1] >= psis[2] + psis[3]


# =============================================================================
# Plücker span
# =============================================================================


def minors_vector(x: QMatrix) -> list[Fraction]:
    """All k x k minors, k = 1..min(rows, cols), rows/cols in lexicographic order."""
    out = []
    for size in range(1, min(x.rows, x.cols) + 1):
        for rs in itertools.combinations(range(x.rows), size):
            for cs in itertools.combinations(range(x.cols), size):
                out.append(determinant(QMatrix.from_rows([[x[r, c] for c in cs] for r in rs], size)))
    return out


def pluecker_span(phi_map: ParametrizedMap, n_samples: int, sampler: RationalSampler, rounds: int = 3) -> int:
    """Dimension of the span of θ(Φ(p)) over samples, stabilized over `rounds` fresh samples."""
    if n_samples < 1:
        raise PreconditionError("n_samples must be >= 1", "pencil.pluecker_span")
    rows: list[list[Fraction]] = []
    width = None
    drawn, unchanged, rank_now = 0, 0, 0
    while drawn < n_samples or unchanged < rounds:
        theta = minors_vector(phi_map.evaluate(sampler.vector(phi_map.n_params)))
        width = len(theta)
        rows, _ = rref(rows + [theta], width)
        drawn += 1
        if drawn > n_samples:
            unchanged = unchanged + 1 if len(rows) == rank_now else 0
        rank_now = len(rows)
    return rank_now


def source_norm_from_json(weights: Sequence[Any] | None, dim: int) -> QuasiNorm:
    return QuasiNorm.of(weights, Side.SOURCE) if weights else QuasiNorm.uniform(dim, Side.SOURCE)


def target_norm_from_json(weights: Sequence[Any] | None, dim: int) -> QuasiNorm:
    return QuasiNorm.of(weights, Side.TARGET) if weights else QuasiNorm.uniform(dim, Side.TARGET)


def candidates_from_json(spec: Mapping[str, Any], grading: Sequence[int] | None, dim_v: int) -> list[tuple[str, Subspace]]:
    """Resolve the "candidates" block of a manifold JSON."""
    strategy = spec.get("strategy", "graded")
    if strategy == "graded":
        if not grading:
            raise SchemaError("graded candidates need a grading", "pencil", path="grading")
        return graded_candidates(grading)
    if strategy == "flag":
        order = spec.get("flag_order") or list(range(dim_v))
        return flag_candidates(order, dim_v)
    subspaces = spec.get("subspaces") or []
    return [
        (f"explicit{i}", Subspace.span([[parse_rational(x) for x in row] for row in sub], dim_v))
        for i, sub in enumerate(subspaces)
    ]


def relatively_free_source_norm(grading: Sequence[int]) -> QuasiNorm:
    """
    Weight i on each degree-i coordinate of F_{k,g}.

    Raises:
        PreconditionError: If the coordinates are not ordered by non-increasing degree
    """
    if any(b > a for a, b in zip(grading, grading[1:])):
        raise PreconditionError("coordinates must be ordered by non-increasing degree", "pencil")
    return QuasiNorm.of(grading, Side.SOURCE)
