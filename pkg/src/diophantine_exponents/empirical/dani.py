"""
Dani-flow systole traces.

For x: V -> E the rows of x' are the coordinate forms u_i* with i in
I(ker x) followed by the rows x_i* with i in J(xV), latest first; the
flow is g_t = a_t x' with a_t = diag(e^{-a_i t} on the kernel rows,
e^{β a_j t} on the image rows). The exponent of x is the infimum of the
β for which the shortest vector of g_t Z^d stays bounded away from 0.

Lattices along the flow are badly skewed, so reduction runs in mpmath
at the configured precision: LLL, then a small coefficient box around
the reduced basis.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from mpmath import mp

from diophantine_exponents.base.types import Flag, SystoleTrace
from diophantine_exponents.common.exceptions import DimensionMismatchError, NumericalError, PreconditionError
from diophantine_exponents.exponents.pencil import QuasiNorm

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL = 1e-9
DEFAULT_DPS = 60
# Singular values within this factor above the tolerance are reported as ambiguous.
AMBIGUITY_BAND = 1e3


# =============================================================================
# Row rearrangement
# =============================================================================


@dataclass
class DaniFrame:
    """x' together with its exponents and index sets (1-based, as in I and J)."""

    matrix: np.ndarray
    rates: list[float]
    kernel_rows: list[int]
    image_rows: list[int]
    condition_number: float
    ambiguous: bool = False

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_rows)


def _rank(rows: np.ndarray, tol: float) -> tuple[int, bool]:
    """Numeric rank with singular values below tol·σ_max treated as zero."""
    if rows.size == 0:
        return 0, False
    sv = np.linalg.svd(rows, compute_uv=False)
    if sv[0] == 0:
        return 0, False
    cutoff = tol * sv[0]
    rank = int(np.sum(sv > cutoff))
    ambiguous = bool(np.any((sv > cutoff) & (sv < AMBIGUITY_BAND * cutoff)))
    return rank, ambiguous


def dani_frame(x: np.ndarray, qv: QuasiNorm, qe: QuasiNorm, rank_tol: float = DEFAULT_RANK_TOL) -> DaniFrame:
    """
    Build x' from J(xV) and I(ker x).

    Raises:
        NumericalError: If x' is singular at the given tolerance
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    e, d = x.shape
    if (e, d) != (qe.dim, qv.dim):
        raise DimensionMismatchError("matrix shape does not match quasi-norms", "dani", expected=qe.dim * qv.dim, actual=x.size)
    ambiguous = False

    image_rows: list[int] = []
    rank = 0
    for i in range(1, e + 1):
        r, amb = _rank(x[:i], rank_tol)
        ambiguous |= amb
        if r > rank:
            image_rows.append(i)
            rank = r
    image_block = x[[i - 1 for i in reversed(image_rows)]]

    kernel_rows: list[int] = []
    current = rank
    eye = np.eye(d)
    for i in range(1, d + 1):
        r, amb = _rank(np.vstack([eye[:i], image_block]), rank_tol)
        ambiguous |= amb
        if r > current:
            kernel_rows.append(i)
            current = r

    matrix = np.vstack([eye[[i - 1 for i in kernel_rows]], image_block])
    if matrix.shape != (d, d):
        raise NumericalError("x' is not square; rank classification failed", "dani")
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition * rank_tol > 1:
        raise NumericalError("x' is singular at the rank tolerance", "dani", condition_number=condition)
    rates = [float(qv.weights[i - 1]) for i in kernel_rows] + [float(qe.weights[i - 1]) for i in reversed(image_rows)]
    if ambiguous:
        logger.warning("rank classification is close to the tolerance (cond %.3g)", condition)
    return DaniFrame(matrix, rates, kernel_rows, image_rows, condition, ambiguous)


# =============================================================================
# Lattice reduction
# =============================================================================


def _dot(u: Sequence, v: Sequence):
    return mp.fsum(a * b for a, b in zip(u, v))


def _gram_schmidt(basis: list[list]) -> tuple[list[list], list[list], list]:
    n = len(basis)
    star: list[list] = []
    mu = [[mp.mpf(0)] * n for _ in range(n)]
    norms = []
    for i in range(n):
        v = list(basis[i])
        for j in range(i):
            mu[i][j] = _dot(basis[i], star[j]) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
    return star, mu, norms


def lll_reduce(basis: list[list], delta: float = 0.75) -> list[list]:
    """LLL on row vectors of mpf."""
    basis = [list(b) for b in basis]
    n = len(basis)
    _, mu, norms = _gram_schmidt(basis)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = mp.nint(mu[k][j])
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                _, mu, norms = _gram_schmidt(basis)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            _, mu, norms = _gram_schmidt(basis)
            k = max(k - 1, 1)
    return basis


def shortest_vector(basis: list[list], radius: int = 2):
    """min ‖Σ c_i b_i‖ over nonzero c in [-radius, radius]^n, after LLL."""
    reduced = lll_reduce(basis)
    best = None
    for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(reduced)):
        if not any(coeffs):
            continue
        v = [mp.fsum(c * b[i] for c, b in zip(coeffs, reduced) if c) for i in range(len(reduced[0]))]
        norm = mp.sqrt(_dot(v, v))
        if best is None or norm < best:
            best = norm
    return best


# =============================================================================
# Traces
# =============================================================================


def dani_systole(
    x: np.ndarray,
    qv: QuasiNorm,
    qe: QuasiNorm,
    beta: float,
    t_grid: Sequence[float],
    radius: int = 2,
    rank_tol: float = DEFAULT_RANK_TOL,
    dps: int = DEFAULT_DPS,
) -> SystoleTrace:
    """
    Shortest nonzero vector of g_t Z^d for each t in t_grid.

    Example:
        ```python
        qv, qe = QuasiNorm.uniform(2, "source"), QuasiNorm.uniform(1, "target")
        trace = dani_systole(np.array([[1.0, 2 ** 0.5]]), qv, qe, 1.0, [0, 5, 10])
        trace.systole   # stays bounded away from 0
        ```
    """
    if beta <= 0:
        raise PreconditionError("beta must be positive", "dani.dani_systole")
    if radius < 1:
        raise PreconditionError("radius must be >= 1", "dani.dani_systole")
    frame = dani_frame(x, qv, qe, rank_tol)
    n = frame.kernel_dim
    systole = []
    with mp.workdps(dps):
        rows = [[mp.mpf(float(v)) for v in row] for row in frame.matrix]
        for t in t_grid:
            scale = [mp.exp(-a * t) if i < n else mp.exp(beta * a * t) for i, a in enumerate(frame.rates)]
            g = [[s * v for v in row] for s, row in zip(scale, rows)]
            # lattice vectors are g·c, so the basis vectors are the columns of g
            basis = [[g[r][c] for r in range(len(g))] for c in range(len(g))]
            systole.append(float(shortest_vector(basis, radius)))
    flags = [Flag.RANK_AMBIGUOUS.value] if frame.ambiguous else []
    logger.debug("dani_systole beta=%g points=%d cond=%.3g", beta, len(systole), frame.condition_number)
    return SystoleTrace(float(beta), [float(t) for t in t_grid], systole, radius, frame.condition_number, flags)
