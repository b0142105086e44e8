"""
Integer-vector enumeration under weighted quasi-norms.

min_image_qnorm scans the box {v in Z^d : |v| <= Q}. The coordinates
are split into a set S of rank(x) "solved" columns and the remaining
free columns, and the free part is enumerated exhaustively. A first pass
takes the rounded least-squares solution of the solved part plus its
{-1,0,1} neighbourhood, which gives an upper bound δ on the minimum. A
second pass enumerates, for every free point, each solved part whose
image could have norm <= δ; the intervals come from the pseudo-inverse
of the solved columns, so the minimum is exact. Only half the box is
scanned since v and -v have the same image norm.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace
from diophantine_exponents.base.types import Flag, SlopeFit
from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    GuardExceededError,
    NumericalError,
    PreconditionError,
)
from diophantine_exponents.common.utils import chunk_ranges, thread_map
from diophantine_exponents.exponents.pencil import QuasiNorm, dirichlet_bound

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 10**9
CHUNK_POINTS = 1 << 21
LOW_R2 = 0.9
# Relative slack on the box boundary, shared by the box and the filter.
BOUNDARY_SLACK = 1e-9


def quasi_norm(v: Sequence[float], weights: Sequence[float]) -> float:
    """max |v_i|^{1/α_i}."""
    return max((abs(float(x)) ** (1.0 / float(a)) for x, a in zip(v, weights)), default=0.0)


def _row_norms(y: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return np.max(np.abs(y) ** (1.0 / weights), axis=1)


# =============================================================================
# Search box
# =============================================================================


@dataclass(frozen=True)
class SearchBox:
    """
    The sublevel set {v in Z^d : |v| <= q} as a coordinate box.

    bounds[i] = ⌊q^{α_i}⌋, since |v_i|^{1/α_i} <= q iff |v_i| <= q^{α_i}.
    """

    q: float
    weights: tuple[float, ...]
    bounds: tuple[int, ...]

    @classmethod
    def of(cls, q: float, qv: QuasiNorm) -> "SearchBox":
        if q < 1:
            raise PreconditionError(f"q must be >= 1, got {q}", "enumeration.SearchBox")
        weights = tuple(float(a) for a in qv.weights)
        bounds = tuple(int(math.floor(q**a * (1 + BOUNDARY_SLACK))) for a in weights)
        return cls(float(q), weights, bounds)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def size(self) -> int:
        return math.prod(2 * b + 1 for b in self.bounds)

    def iter_box(self) -> Iterator[tuple[int, ...]]:
        """Nonzero integer vectors of the box."""
        for v in itertools.product(*(range(-b, b + 1) for b in self.bounds)):
            if any(v):
                yield v

    def iter_filtered(self) -> Iterator[tuple[int, ...]]:
        """Reference enumerator: scan the enclosing cube and filter by the quasi-norm."""
        radius = max(self.bounds, default=0)
        limit = self.q * (1 + BOUNDARY_SLACK)
        for v in itertools.product(range(-radius, radius + 1), repeat=self.dim):
            if any(v) and quasi_norm(v, self.weights) <= limit:
                yield v


# =============================================================================
# Minimum of the image quasi-norm
# =============================================================================


@dataclass(frozen=True)
class _SolvePlan:
    solved: tuple[int, ...]
    free: tuple[int, ...]
    pinv: np.ndarray


def _solve_plan(x: np.ndarray, tol: float = 1e-12) -> _SolvePlan:
    """Greedily pick rank(x) columns, earliest first (largest source weight)."""
    solved: list[int] = []
    rank = 0
    for j in range(x.shape[1]):
        if rank == x.shape[0]:
            break
        trial = np.linalg.matrix_rank(x[:, solved + [j]], tol=tol * max(1.0, np.abs(x).max()))
        if trial > rank:
            solved.append(j)
            rank = trial
    free = tuple(j for j in range(x.shape[1]) if j not in solved)
    pinv = np.linalg.pinv(x[:, solved]) if solved else np.zeros((0, x.shape[0]))
    return _SolvePlan(tuple(solved), free, pinv)


def _free_chunks(bounds: Sequence[int], lo: int, hi: int, max_points: int = CHUNK_POINTS) -> Iterator[np.ndarray]:
    """Integer grid with first coordinate in [lo, hi] and the rest in their full ranges."""
    if not bounds:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    inner_axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds[1:]]
    inner = math.prod(len(a) for a in inner_axes)
    rows = max(1, max_points // max(inner, 1))
    for start in range(lo, hi + 1, rows):
        outer = np.arange(start, min(start + rows, hi + 1), dtype=np.int64)
        grids = np.meshgrid(outer, *inner_axes, indexing="ij")
        yield np.stack([g.reshape(-1) for g in grids], axis=1)


def _scan(
    x: np.ndarray,
    plan: _SolvePlan,
    bounds: np.ndarray,
    target_weights: np.ndarray,
    offsets: np.ndarray,
    relative: np.ndarray,
    lo: int,
    hi: int,
) -> float:
    """
    Minimum over the free grid of one slab.

    Solved coordinates are base + offset, clipped to the box, where the base
    is the rounded least-squares solution on `relative` coordinates and 0
    elsewhere.
    """
    free_bounds = [int(bounds[j]) for j in plan.free]
    solved_bounds = bounds[list(plan.solved)] if plan.solved else np.zeros(0)
    x_free = x[:, list(plan.free)]
    x_solved = x[:, list(plan.solved)]
    best = math.inf
    for pts in _free_chunks(free_bounds, lo, hi):
        c = pts @ x_free.T if plan.free else np.zeros((1, x.shape[0]))
        free_zero = ~pts.any(axis=1)
        if plan.solved:
            base = np.where(relative, np.rint(-(c @ plan.pinv.T)), 0.0)
        else:
            base = np.zeros((len(c), 0))
        for off in offsets:
            vs = np.clip(base + off, -solved_bounds, solved_bounds)
            y = c + vs @ x_solved.T if plan.solved else c
            norms = _row_norms(y, target_weights)
            norms[free_zero & ~vs.any(axis=1)] = math.inf
            best = min(best, float(norms.min()))
    return best


def _neighbours(r: int) -> np.ndarray:
    return np.array(list(itertools.product((-1, 0, 1), repeat=r)), dtype=np.float64).reshape(-1, r)


def _exact_offsets(
    plan: _SolvePlan, solved_bounds: Sequence[int], target_weights: np.ndarray, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """
    Offsets that reach every solved part with image norm <= delta.

    If |y_i| <= delta^{β_i} for y = c + X_S u, then u = P(y - c) with
    P = pinv(X_S), so |u_j + (Pc)_j| <= Σ_i |P_ji| delta^{β_i}. Coordinates
    whose interval is at least as wide as the box are scanned absolutely.
    """
    if math.isfinite(delta):
        reach = np.abs(plan.pinv) @ (delta**target_weights)
    else:
        reach = np.full(len(plan.solved), math.inf)
    relative = np.zeros(len(plan.solved), dtype=bool)
    ranges = []
    for j, (r, b) in enumerate(zip(reach, solved_bounds)):
        # rounding the centre moves it by at most 1/2
        radius = r * (1 + BOUNDARY_SLACK) + 0.5 + BOUNDARY_SLACK
        if radius < b:
            relative[j] = True
            ranges.append(range(-int(radius), int(radius) + 1))
        else:
            ranges.append(range(-int(b), int(b) + 1))
    offsets = np.array(list(itertools.product(*ranges)), dtype=np.float64).reshape(-1, len(plan.solved))
    return offsets, relative


def min_image_qnorm(
    x: np.ndarray,
    qv: QuasiNorm,
    qe: QuasiNorm,
    q: float,
    threads: int = 1,
    guard: float = DEFAULT_GUARD,
) -> float:
    """
    min |xv|' over nonzero v in Z^d with |v| <= q.

    Args:
        x: Real e x d matrix
        qv: Source quasi-norm (weights of the coordinates of v)
        qe: Target quasi-norm
        q: Radius, >= 1
        threads: Worker threads over slabs of the first free coordinate
        guard: Maximum number of vectors evaluated by either pass

    Raises:
        GuardExceededError: If the scan would evaluate more than `guard` vectors

    Example:
        ```python
        qv, qe = QuasiNorm.uniform(2, "source"), QuasiNorm.uniform(1, "target")
        min_image_qnorm(np.array([[1.0, 2.0]]), qv, qe, 10)   # 0.0
        ```
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape != (qe.dim, qv.dim):
        raise DimensionMismatchError(
            "matrix shape does not match quasi-norms", "enumeration", expected=qe.dim * qv.dim, actual=x.size
        )
    box = SearchBox.of(q, qv)
    plan = _solve_plan(x)
    bounds = np.array(box.bounds, dtype=np.float64)
    # half box: v and -v give the same norm
    free_work = math.prod(2 * box.bounds[j] + 1 for j in plan.free[1:])
    if plan.free:
        free_work *= box.bounds[plan.free[0]] + 1
    target_weights = np.array([float(a) for a in qe.weights])
    if plan.free:
        slabs = chunk_ranges(0, box.bounds[plan.free[0]], threads)
    else:
        slabs = [(0, 0)]

    def run(offsets: np.ndarray, relative: np.ndarray) -> float:
        work = free_work * len(offsets)
        if work > guard:
            raise GuardExceededError(
                f"scan of {work} vectors exceeds the guard {int(guard)}", "enumeration", size=work, guard=int(guard)
            )
        minima = thread_map(lambda slab: _scan(x, plan, bounds, target_weights, offsets, relative, *slab), slabs, threads)
        return min(minima)

    n_solved = len(plan.solved)
    upper = run(_neighbours(n_solved), np.ones(n_solved, dtype=bool))
    result = upper
    if n_solved:
        offsets, relative = _exact_offsets(plan, [box.bounds[j] for j in plan.solved], target_weights, upper)
        result = min(upper, run(offsets, relative))
        logger.debug("exact pass over %d offsets per free point", len(offsets))
    logger.debug("min_image_qnorm q=%g free=%d min=%.6g", q, free_work, result)
    return result


# =============================================================================
# Slope estimation
# =============================================================================


def geometric_schedule(q0: float = 16, ratio: float = 2, points: int = 10) -> list[float]:
    return [q0 * ratio**i for i in range(points)]


def geometric_span(q0: float, q_max: float, points: int) -> list[float]:
    """`points` geometrically spaced radii from q0 to q_max inclusive."""
    if points < 2 or q_max <= q0:
        raise PreconditionError("need points >= 2 and q_max > q0", "enumeration.geometric_span")
    ratio = (q_max / q0) ** (1 / (points - 1))
    return [q0 * ratio**i for i in range(points)]


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """OLS (slope, intercept, r2)."""
    if len(xs) < 2:
        raise NumericalError("need at least two points for a slope", "enumeration.fit_slope")
    xa, ya = np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)
    slope, intercept = np.polyfit(xa, ya, 1)
    residual = float(np.sum((ya - (slope * xa + intercept)) ** 2))
    total = float(np.sum((ya - ya.mean()) ** 2))
    r2 = 1.0 - residual / total if total > 0 else 1.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def estimate_beta(
    x: np.ndarray,
    qv: QuasiNorm,
    qe: QuasiNorm,
    q_schedule: Sequence[float],
    threads: int = 1,
    guard: float = DEFAULT_GUARD,
) -> SlopeFit:
    """
    Slope of -log(min_image_qnorm) against log Q.

    Exact zero minima (a rational kernel vector in the box) are excluded
    and flagged rather than clamped.

    Raises:
        PreconditionError: If the schedule has fewer than 6 points or is not increasing
    """
    qs = [float(q) for q in q_schedule]
    if len(qs) < 6:
        raise PreconditionError("q_schedule needs at least 6 points", "enumeration.estimate_beta")
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise PreconditionError("q_schedule must be increasing", "enumeration.estimate_beta")

    minima = [min_image_qnorm(x, qv, qe, q, threads, guard) for q in qs]
    points = [(math.log(q), -math.log(m)) for q, m in zip(qs, minima) if m > 0]
    excluded = [q for q, m in zip(qs, minima) if m == 0]
    flags = []
    if excluded:
        flags.append(Flag.ZERO_MINIMUM.value)
        logger.warning("excluded %d radii with an exact zero minimum", len(excluded))
    slope, intercept, r2 = fit_slope([p[0] for p in points], [p[1] for p in points])
    if r2 < LOW_R2:
        flags.append(Flag.LOW_R2.value)
        logger.warning("slope fit has r2 = %.3f", r2)
    return SlopeFit(points, slope, intercept, r2, qs, minima, excluded, flags)


# =============================================================================
# Exact lower bounds for a real point
# =============================================================================


def exact_matrix(x: np.ndarray) -> QMatrix:
    """The binary rationals of a float matrix, as an exact QMatrix."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    return QMatrix.from_rows([[Fraction(float(v)) for v in row] for row in x], x.shape[1])


def dirichlet_floor(
    x: np.ndarray,
    candidates: Sequence[Subspace],
    qv: QuasiNorm,
    qe: QuasiNorm,
) -> Fraction | None:
    """max over candidates of dirichlet_bound(x, W); None if any candidate gives +∞."""
    exact = exact_matrix(x)
    best = Fraction(0)
    for w in candidates:
        bound = dirichlet_bound(exact, w, qv, qe)
        if bound is None:
            return None
        best = max(best, bound)
    return best
