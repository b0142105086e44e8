"""
Closed-form number theory and representation theory.

Möbius and Mertens functions, Young diagrams with two independent
dimension formulas for GL_k representations (Weyl product and hook
content), the dominance comparison, and the explicit exponents of the
Heisenberg, step-2, metabelian, U_s, free nilpotent and Veronese
families. These serve as the oracle for the pencil machinery.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from sympy import divisors, factorint
from sympy.utilities.iterables import partitions

from diophantine_exponents.base.types import ExponentValue, Flag
from diophantine_exponents.common.exceptions import OracleMismatchError, PreconditionError

logger = logging.getLogger(__name__)

# Horizon for the stable_from scan above the first admissible k.
STABLE_HORIZON = 40


# =============================================================================
# Number theory
# =============================================================================


def mobius(n: int) -> int:
    """Möbius function μ(n)."""
    if n < 1:
        raise PreconditionError("mobius is defined for n >= 1", "repthy.mobius")
    factors = factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def mertens(x: int) -> int:
    """Mertens function M(x) = Σ_{n<=x} μ(n); M(0) = 0."""
    if x < 0:
        raise PreconditionError("mertens is defined for x >= 0", "repthy.mertens")
    return sum(mobius(n) for n in range(1, x + 1))


def necklace_count(k: int, i: int) -> int:
    """(1/i) Σ_{d|i} μ(d) k^{i/d}."""
    return sum(mobius(d) * k ** (i // d) for d in divisors(i)) // i


def mertens_growth(s: int, k: int) -> int:
    """Σ_{i<=s} M(s/i) k^i: the homogeneous dimension of the free s-step group on k generators."""
    return sum(mertens(s // i) * k**i for i in range(1, s + 1))


# =============================================================================
# Young diagrams
# =============================================================================


@dataclass(frozen=True)
class YoungDiagram:
    """Partition λ_1 >= λ_2 >= … > 0."""

    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(r <= 0 for r in self.rows):
            raise PreconditionError(f"parts of {self.rows} must be positive", "repthy.YoungDiagram")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise PreconditionError(f"parts of {self.rows} must be non-increasing", "repthy.YoungDiagram")

    @classmethod
    def of(cls, *rows: int) -> "YoungDiagram":
        return cls(tuple(rows))

    @property
    def boxes(self) -> int:
        return sum(self.rows)

    @property
    def length(self) -> int:
        return len(self.rows)

    def conjugate(self) -> "YoungDiagram":
        return YoungDiagram(tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0] if self.rows else 0)))

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in range(r)]

    def dominates(self, other: "YoungDiagram") -> bool:
        """True iff other is obtained from self by moving boxes down."""
        if self.boxes != other.boxes:
            return False
        n = max(self.length, other.length)
        mine = list(self.rows) + [0] * (n - self.length)
        theirs = list(other.rows) + [0] * (n - other.length)
        return all(a >= b for a, b in zip(itertools.accumulate(mine), itertools.accumulate(theirs)))

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.rows) + ")"


def young_diagrams(boxes: int) -> list[YoungDiagram]:
    """All partitions of `boxes`, largest first part first."""
    out = []
    for p in partitions(boxes):
        rows = sorted((part for part, mult in p.items() for _ in range(mult)), reverse=True)
        out.append(YoungDiagram(tuple(rows)))
    return sorted(out, key=lambda d: d.rows, reverse=True)


def weyl_dim(lam: YoungDiagram, k: int) -> int:
    """d_λ(k) = Π_{i<j<=k} (λ_i - λ_j + j - i)/(j - i); 0 when λ has more than k rows."""
    if lam.length > k:
        return 0
    padded = list(lam.rows) + [0] * (k - lam.length)
    value = Fraction(1)
    for i in range(k):
        for j in range(i + 1, k):
            value *= Fraction(padded[i] - padded[j] + j - i, j - i)
    return int(value)


def hook_content_dim(lam: YoungDiagram, k: int) -> int:
    """Π_{cells} (k + content) / hook."""
    conj = lam.conjugate().rows
    value = Fraction(1)
    for i, j in lam.cells():
        hook = (lam.rows[i] - j - 1) + (conj[j] - i - 1) + 1
        value *= Fraction(k + j - i, hook)
    return int(value)


def checked_dim(lam: YoungDiagram, k: int) -> int:
    """
    Dimension of E^λ(k) by both formulas.

    Raises:
        OracleMismatchError: If the Weyl product and the hook-content formula disagree
    """
    a, b = weyl_dim(lam, k), hook_content_dim(lam, k)
    if a != b:
        raise OracleMismatchError(f"weyl_dim {a} != hook_content_dim {b} for {lam}, k={k}", "repthy")
    return a


def dominance_check(lam: YoungDiagram, mu: YoungDiagram, k: int, d: int) -> bool:
    """
    d_μ(k)/d_μ(d) >= d_λ(k)/d_λ(d) when μ comes from λ by moving boxes down.

    Raises:
        PreconditionError: If μ is not below λ, or k >= d >= rows fails
    """
    if not lam.dominates(mu):
        raise PreconditionError(f"{mu} is not obtained from {lam} by moving boxes down", "repthy.dominance_check")
    if not k >= d >= max(lam.length, mu.length):
        raise PreconditionError("need k >= d >= number of rows", "repthy.dominance_check")
    return Fraction(checked_dim(mu, k), checked_dim(mu, d)) >= Fraction(checked_dim(lam, k), checked_dim(lam, d))


def lambda0(s: int) -> YoungDiagram:
    """λ0 = (2, 1^{s-2})."""
    if s < 2:
        raise PreconditionError("λ0 needs s >= 2", "repthy.lambda0")
    return YoungDiagram((2,) + (1,) * (s - 2))


def klyachko_diagrams(s: int) -> list[YoungDiagram]:
    """
    Diagrams with s boxes occurring in the degree-s part of a free Lie algebra.

    Excluded: (s), (1^s), and additionally (2,2) at s = 4 and (2,2,2) at s = 6.
    """
    excluded = {(s,), (1,) * s}
    if s == 4:
        excluded.add((2, 2))
    if s == 6:
        excluded.add((2, 2, 2))
    return [d for d in young_diagrams(s) if d.rows not in excluded]


def hook_dim(i: int, k: int) -> int:
    """dim E^{(i-1,1)}(k) = (i-1) C(i+k-2, i)."""
    value = (i - 1) * comb(i + k - 2, i)
    if i >= 2 and k >= 2 and value != checked_dim(YoungDiagram.of(i - 1, 1), k):
        raise OracleMismatchError(f"hook dimension mismatch at i={i}, k={k}", "repthy")
    return value


# =============================================================================
# stable_from surrogate
# =============================================================================


def graded_best_ratio(slice_dims: Sequence[int], lcs_dims: Sequence[int]) -> Fraction:
    """
    Largest ψ_M/φ_M over direct sums of graded slices of F_{k,g}.

    Generic ranks are taken maximal: the image of ⊕_{i in S, i >= j} F^{[i]}
    has dimension min(Σ f_i, dim g^{(min degree)}). Source weights are
    the degrees, target weights are 1.
    """
    s = len(slice_dims)
    best = Fraction(0)
    for size in range(1, s + 1):
        for chosen in itertools.combinations(range(1, s + 1), size):
            psi = 0
            for j in range(1, s + 1):
                tail = [i for i in chosen if i >= j]
                if tail:
                    total = sum(slice_dims[i - 1] for i in tail)
                    psi += total - min(total, lcs_dims[min(tail) - 1])
            total = sum(slice_dims[i - 1] for i in chosen)
            phi = min(total, lcs_dims[min(chosen) - 1])
            if phi:
                best = max(best, Fraction(psi, phi))
    return best


def graded_stable_from(
    slice_dims: Callable[[int], Sequence[int]],
    lcs_dims: Sequence[int],
    designated: Callable[[int], Fraction],
    k_min: int,
    horizon: int = STABLE_HORIZON,
) -> int | None:
    """
    Smallest k0 >= k_min such that the designated ratio attains the graded
    maximum for every k in [k0, k_min + horizon]; None if it fails at the end.
    """
    stable_from = None
    for k in range(k_min, k_min + horizon + 1):
        if designated(k) >= graded_best_ratio(slice_dims(k), lcs_dims):
            if stable_from is None:
                stable_from = k
        else:
            stable_from = None
    return stable_from


# =============================================================================
# Explicit exponents
# =============================================================================


def heisenberg_beta(k: int) -> ExponentValue:
    """β = 1 - 1/k - 2/k² for almost every k-tuple in the Heisenberg group."""
    if k < 2:
        raise PreconditionError("heisenberg_beta needs k >= 2", "repthy.heisenberg_beta")
    alpha = Fraction(k * k - k - 2)
    beta = 1 - Fraction(1, k) - Fraction(2, k * k)
    stable = graded_stable_from(lambda kk: [kk, comb(kk, 2)], [3, 1], lambda kk: Fraction(kk * kk - kk - 2), 2)
    return ExponentValue("heisenberg", {"k": k}, alpha, k * k, beta, Fraction(1), stable)


def step2_beta(d2: int, k: int, d1: int | None = None) -> ExponentValue:
    """
    β = 1/d2 - 1/(d2 k) - 2/k² for a step-2 group with dim g^{(2)} = d2.

    Args:
        d2: Dimension of the derived subalgebra
        k: Number of random elements
        d1: Dimension of g/[g,g]; enables the k >= d1 guard and stable_from

    Raises:
        PreconditionError: If k < d1 or d2 is out of range
    """
    if d2 < 1 or k < 2:
        raise PreconditionError("step2_beta needs d2 >= 1 and k >= 2", "repthy.step2_beta")
    if d1 is not None:
        if k < d1:
            raise PreconditionError(f"step2_beta needs k >= d1 = {d1}", "repthy.step2_beta")
        if d2 > d1 * (d1 - 1) // 2:
            raise PreconditionError("d2 exceeds d1(d1-1)/2", "repthy.step2_beta")
    alpha = Fraction(k * (k - 1), d2) - 2
    beta = Fraction(1, d2) - Fraction(1, d2 * k) - Fraction(2, k * k)
    stable = None
    if d1 is not None:
        stable = graded_stable_from(
            lambda kk: [kk, comb(kk, 2)], [d1 + d2, d2], lambda kk: Fraction(kk * (kk - 1), d2) - 2, d1
        )
    params = {"d2": d2, "k": k} if d1 is None else {"d1": d1, "d2": d2, "k": k}
    return ExponentValue("step2", params, alpha, k * k, beta, Fraction(1, d2), stable)


def metabelian_beta(s: int, dim_last: int, k: int, lcs_dims: Sequence[int] | None = None) -> ExponentValue:
    """
    Exponent of a metabelian s-step group with dim G^{(s)} = dim_last.

    α = s·dim E^{(s-1,1)}(k)/dim_last - s and η = k + Σ_{i=2}^s i·dim E^{(i-1,1)}(k).
    stable_from is computed when the dimensions of the lower central
    series are supplied.
    """
    if s < 2 or dim_last < 1 or k < 2:
        raise PreconditionError("metabelian_beta needs s >= 2, dim_last >= 1, k >= 2", "repthy.metabelian_beta")
    alpha = Fraction(s * hook_dim(s, k), dim_last) - s
    eta = k + sum(i * hook_dim(i, k) for i in range(2, s + 1))
    stable = None
    if lcs_dims is not None:
        if len(lcs_dims) != s or lcs_dims[-1] != dim_last:
            raise PreconditionError("lcs_dims must list dim g^{(1)}..g^{(s)}", "repthy.metabelian_beta")
        stable = graded_stable_from(
            lambda kk: [kk] + [hook_dim(i, kk) for i in range(2, s + 1)],
            lcs_dims,
            lambda kk: Fraction(s * hook_dim(s, kk), dim_last) - s,
            2,
        )
    return ExponentValue(
        "metabelian", {"s": s, "dim_last": dim_last, "k": k}, alpha, eta, alpha / eta, Fraction(1, dim_last), stable
    )


def us_beta(s: int, k: int) -> ExponentValue:
    """β = (Σ_{d|s} μ(d) k^{s/d} - s) / Σ_{i<=s} M(s/i) k^i for the unipotent group U_s."""
    if s < 2 or k < s:
        raise PreconditionError("us_beta needs s >= 2 and k >= s", "repthy.us_beta")
    alpha = Fraction(sum(mobius(d) * k ** (s // d) for d in divisors(s)) - s)
    eta = mertens_growth(s, k)
    lcs = [sum(s + 1 - i for i in range(m, s + 1)) for m in range(1, s + 1)]
    stable = graded_stable_from(
        lambda kk: [necklace_count(kk, i) for i in range(1, s + 1)],
        lcs,
        lambda kk: Fraction(s * necklace_count(kk, s) - s),
        s,
    )
    return ExponentValue("us", {"s": s, "k": k}, alpha, eta, alpha / eta, Fraction(1), stable)


def free_beta(d: int, s: int, k: int) -> ExponentValue:
    """
    Exponent of k random elements of the free s-step nilpotent group on d >= s generators.

    At s = 2 the diagram (2, 1^{s-2}) degenerates to (2), which does not
    occur in the degree-2 part of a free Lie algebra; the step-2 formula
    with d2 = d(d-1)/2 is used and the result is flagged.

    Raises:
        PreconditionError: If d < s or k < d
    """
    if d < s:
        raise PreconditionError(f"free_beta needs d >= s, got d={d}, s={s}", "repthy.free_beta")
    if s == 2:
        value = step2_beta(d * (d - 1) // 2, k, d1=d)
        value.family = "free"
        value.parameters = {"d": d, "s": s, "k": k}
        value.flags.append(Flag.S2_DISPATCH.value)
        return value
    if s < 2 or k < d:
        raise PreconditionError("free_beta needs s >= 2 and k >= d", "repthy.free_beta")
    lam0 = lambda0(s)
    top_k, top_d = checked_dim(lam0, k), checked_dim(lam0, d)
    if top_k != (s - 1) * comb(k + 1, s):
        raise OracleMismatchError("d_λ0(k) != (s-1) C(k+1, s)", "repthy.free_beta")
    alpha = s * (Fraction(top_k, top_d) - 1)
    eta = mertens_growth(s, k)
    beta = Fraction(s, comb(d + 1, s)) * Fraction(comb(k + 1, s) - comb(d + 1, s), eta)
    if beta != alpha / eta:
        raise OracleMismatchError("free nilpotent closed form disagrees with α/η", "repthy.free_beta")
    lcs = [sum(necklace_count(d, i) for i in range(m, s + 1)) for m in range(1, s + 1)]
    stable = graded_stable_from(
        lambda kk: [necklace_count(kk, i) for i in range(1, s + 1)],
        lcs,
        lambda kk: s * (Fraction(checked_dim(lam0, kk), top_d) - 1),
        d,
    )
    limit = Fraction(1, factorial(s - 1) * comb(d + 1, s))
    return ExponentValue("free", {"d": d, "s": s, "k": k}, alpha, eta, beta, limit, stable)


def veronese_beta(p: int, m: int) -> Fraction:
    """max{0, (p+1-m)/m}: p is the degree, m the largest dimension of a one-generator subalgebra."""
    if p < 1 or m < 1:
        raise PreconditionError("veronese_beta needs p >= 1 and m >= 1", "repthy.veronese_beta")
    return max(Fraction(0), Fraction(p + 1 - m, m))


# =============================================================================
# Tables
# =============================================================================

FORMULAS: dict[str, Callable[..., ExponentValue]] = {
    "heisenberg": heisenberg_beta,
    "step2": step2_beta,
    "metabelian": metabelian_beta,
    "us": us_beta,
    "free": free_beta,
}


def formula_table(family: str, ks: Sequence[int], **params: int) -> list[ExponentValue]:
    """
    Evaluate one formula family over several k.

    Example:
        ```python
        rows = formula_table("us", [3, 4, 5], s=3)
        [str(r.beta) for r in rows]   # ['7/11', ...]
        ```
    """
    if family not in FORMULAS:
        raise PreconditionError(f"Unknown formula family '{family}'. Supported: {', '.join(FORMULAS)}", "repthy")
    try:
        return [FORMULAS[family](k=k, **params) for k in ks]
    except TypeError as e:
        raise PreconditionError(f"Bad parameters for '{family}': {sorted(params)}", "repthy") from e
