"""
Word maps in the three-dimensional Heisenberg group.

Elements are (x, y, z) with (x,y,z)*(x',y',z') = (x+x', y+y', z+z'+xy').
Every word in g_1..g_k equals g_1^{n_1}…g_k^{n_k} Π_{i<j} [g_i,g_j]^{n_ij}
for unique integers; its length is comparable to
max{|n_l|, |n_ij|^{1/2}} and its distance to the identity to
max{|X|, |Y|, |Z|}.

Two kinds of words are scanned at each length ℓ:
    central words (all n_l = 0): Z = Σ n_ij c_ij with |n_ij| <= ℓ²; the
        last coefficient is solved by rounding, which is exact.
    words with n ≠ 0: only those with max{|X|, |Y|} below the central
        minimum can matter; for them Z is completed exactly over the n_ij.
"""

import itertools
import logging
import math
from typing import Sequence

import numpy as np

from diophantine_exponents.base.types import Flag, SlopeFit
from diophantine_exponents.common.exceptions import GuardExceededError, PreconditionError
from diophantine_exponents.empirical.enumeration import CHUNK_POINTS, DEFAULT_GUARD, LOW_R2, fit_slope

logger = logging.getLogger(__name__)

Element = tuple[float, float, float]


def multiply(g: Element, h: Element) -> Element:
    return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])


def power(g: Element, n: int) -> Element:
    """g^n = (n x, n y, n z + C(n,2) x y)."""
    x, y, z = g
    return (n * x, n * y, n * z + n * (n - 1) / 2 * x * y)


def inverse(g: Element) -> Element:
    return power(g, -1)


def commutator(g: Element, h: Element) -> Element:
    """[g, h] = g h g^{-1} h^{-1} = (0, 0, x y' - x' y)."""
    return multiply(multiply(multiply(g, h), inverse(g)), inverse(h))


def word_value(g_tuple: Sequence[Element], n: Sequence[int], n_pairs: dict[tuple[int, int], int]) -> Element:
    """Evaluate g_1^{n_1}…g_k^{n_k} Π [g_i,g_j]^{n_ij}."""
    out: Element = (0.0, 0.0, 0.0)
    for g, e in zip(g_tuple, n):
        out = multiply(out, power(g, e))
    for (i, j), e in sorted(n_pairs.items()):
        out = multiply(out, power(commutator(g_tuple[i], g_tuple[j]), e))
    return out


def distance(g: Element) -> float:
    return max(abs(g[0]), abs(g[1]), abs(g[2]))


def _linear_min(c: np.ndarray, bound: int, guard: float, shift: float = 0.0, homogeneous: bool = True) -> float:
    """
    min |shift + Σ n_p c_p| over integer n with |n_p| <= bound.

    Homogeneous scans exclude n = 0 and use n ~ -n to halve the box; the
    others allow n = 0. The last coefficient is solved by clipped rounding,
    which is exact for a convex function of one integer.
    """
    m = len(c)
    work = (2 * bound + 1) ** (m - 1)
    if work > guard:
        raise GuardExceededError(f"central scan of {work} words exceeds the guard", "heisenberg", size=work, guard=int(guard))
    last = c[-1]

    def solve(partial: np.ndarray) -> np.ndarray:
        if not last:
            return np.abs(partial)
        solved = np.clip(np.rint(-partial / last), -bound, bound)
        return np.abs(partial + solved * last)

    if m == 1:
        if homogeneous:
            return abs(float(last))
        return float(solve(np.array([shift]))[0])
    free_axes = [np.arange(-bound, bound + 1, dtype=np.int64)] * (m - 1)
    if homogeneous:
        # first free coefficient >= 0: n and -n give the same |Z|
        free_axes[0] = np.arange(0, bound + 1, dtype=np.int64)
    inner = (2 * bound + 1) ** (m - 2)
    rows = max(1, CHUNK_POINTS // inner)
    best = math.inf
    first = free_axes[0]
    for start in range(0, len(first), rows):
        grids = np.meshgrid(first[start : start + rows], *free_axes[1:], indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=1)
        values = solve(shift + pts @ c[:-1])
        if homogeneous:
            # the zero row stands for n = (0, …, 0, ±1)
            values[~pts.any(axis=1)] = abs(last)
        best = min(best, float(values.min()))
    return best


def _central_min(c: np.ndarray, bound: int, guard: float) -> float:
    """min |Σ n_p c_p| over nonzero integer n with |n_p| <= bound."""
    return _linear_min(c, bound, guard)


def _abelian_words(
    g_tuple: Sequence[Element], c: np.ndarray, ell: int, below: float, guard: float
) -> float:
    """
    min d(ω, 1) over words with a nonzero abelian part n, |n_l| <= ℓ, |n_ij| <= ℓ².

    Words with max{|X|, |Y|} >= `below` cannot improve on it and are skipped;
    the others get their exact central coordinate
    Z = Σ n_l z_l + Σ C(n_l, 2) x_l y_l + Σ_{l<m} n_l n_m x_l y_m + Σ n_ij c_ij.
    """
    k = len(g_tuple)
    work = (2 * ell + 1) ** k
    if work > guard:
        raise GuardExceededError(f"abelian scan of {work} words exceeds the guard", "heisenberg", size=work, guard=int(guard))
    xs, ys, zs = (np.array([g[i] for g in g_tuple], dtype=np.float64) for i in range(3))
    axis = np.arange(-ell, ell + 1, dtype=np.int64)
    rows = max(1, CHUNK_POINTS // (2 * ell + 1) ** (k - 1))
    kept = []
    for start in range(0, len(axis), rows):
        grids = np.meshgrid(axis[start : start + rows], *([axis] * (k - 1)), indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=1)
        pts = pts[pts.any(axis=1)]
        abelian = np.maximum(np.abs(pts @ xs), np.abs(pts @ ys))
        kept.append(pts[abelian < below])
    close = np.concatenate(kept)
    if not len(close):
        return below
    per_word = (2 * ell * ell + 1) ** (len(c) - 1)
    if per_word * len(close) > guard:
        raise GuardExceededError(
            f"central completion of {len(close)} words exceeds the guard", "heisenberg", size=per_word * len(close), guard=int(guard)
        )
    nf = close.astype(np.float64)
    z0 = nf @ zs + (nf * (nf - 1) / 2) @ (xs * ys)
    # cross terms x_l y_m for l < m
    z0 += np.einsum("nl,lm,nm->n", nf, np.triu(np.outer(xs, ys), 1), nf)
    best = below
    for n, z in zip(nf, z0):
        central = _linear_min(c, ell * ell, guard, shift=float(z), homogeneous=False)
        best = min(best, max(abs(float(n @ xs)), abs(float(n @ ys)), central))
    return best


def word_min_at_length(g_tuple: Sequence[Element], ell: int, guard: float = DEFAULT_GUARD) -> float:
    """min d(ω(g), 1) over nontrivial words ω with |n_l| <= ℓ and |n_ij| <= ℓ²."""
    xs = np.array([g[0] for g in g_tuple], dtype=np.float64)
    ys = np.array([g[1] for g in g_tuple], dtype=np.float64)
    pairs = list(itertools.combinations(range(len(g_tuple)), 2))
    c = np.array([xs[i] * ys[j] - xs[j] * ys[i] for i, j in pairs], dtype=np.float64)
    central = _central_min(c, ell * ell, guard)
    best = _abelian_words(g_tuple, c, ell, central, guard)
    logger.debug("length %d: central %.3g overall %.3g", ell, central, best)
    return best


def length_schedule(bound: int, points: int = 8) -> list[int]:
    """Distinct integer lengths from 2 to bound, roughly geometric."""
    if bound < 2:
        raise PreconditionError("bound must be >= 2", "heisenberg.length_schedule")
    raw = np.geomspace(2, bound, num=points)
    return sorted({int(round(v)) for v in raw})


def heisenberg_word_min(
    g_tuple: Sequence[Element],
    k: int,
    bound: int,
    points: int = 8,
    guard: float = DEFAULT_GUARD,
) -> SlopeFit:
    """
    Minimum distance to 1 over nontrivial words of length <= ℓ, and its log-log slope.

    The schedule (ℓ values) is stored in SlopeFit.q_schedule. Lengths at
    which the minimum is exactly 0 (rationally dependent commutators)
    are excluded and flagged.

    Example:
        ```python
        rng = np.random.default_rng(3)
        fit = heisenberg_word_min([tuple(rng.uniform(-1, 1, 3)) for _ in range(3)], 3, 60)
        fit.slope   # about 4
        ```
    """
    if k < 2:
        raise PreconditionError("k must be >= 2", "heisenberg.heisenberg_word_min")
    if len(g_tuple) != k:
        raise PreconditionError(f"expected {k} elements, got {len(g_tuple)}", "heisenberg.heisenberg_word_min")
    lengths = length_schedule(bound, points)
    minima = [word_min_at_length(g_tuple, ell, guard) for ell in lengths]

    points_ = [(math.log(ell), -math.log(m)) for ell, m in zip(lengths, minima) if m > 0]
    excluded = [float(ell) for ell, m in zip(lengths, minima) if m == 0]
    flags = []
    if excluded:
        flags.append(Flag.ZERO_MINIMUM.value)
        logger.warning("commutators are rationally dependent: %d lengths excluded", len(excluded))
    slope, intercept, r2 = fit_slope([p[0] for p in points_], [p[1] for p in points_])
    if r2 < LOW_R2:
        flags.append(Flag.LOW_R2.value)
    return SlopeFit(points_, slope, intercept, r2, [float(v) for v in lengths], minima, excluded, flags)
