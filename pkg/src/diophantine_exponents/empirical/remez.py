"""
Level sets of square-free quadratic forms.

For q(x) = Σ_{k<l} a_kl x_k x_l the Lebesgue measure of
{x in B(0,1) : |q(x)| <= ε} is at most
2^{d+1} ε / max|a| · (1 + log⁺(√d max|a| / ε)).
quadratic_level_measure estimates the left side by Monte Carlo, as a
measure or as a fraction of the domain.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from diophantine_exponents.common.exceptions import OracleMismatchError, PreconditionError

logger = logging.getLogger(__name__)

DOMAINS = ("ball", "cube")


def _coefficients(q_coeffs: Any) -> np.ndarray:
    """Strictly upper triangular coefficient matrix from an array or {(k, l): a} with k < l."""
    if isinstance(q_coeffs, Mapping):
        d = max(max(k, l) for k, l in q_coeffs) + 1 if q_coeffs else 0
        a = np.zeros((d, d))
        for (k, l), v in q_coeffs.items():
            if k >= l:
                raise PreconditionError("use pairs k < l; squares are not allowed", "remez")
            a[k, l] = float(v)
    else:
        a = np.array(q_coeffs, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PreconditionError("coefficients must be a square matrix", "remez")
        if np.any(np.tril(a) != 0):
            raise PreconditionError("only the strict upper triangle may be nonzero", "remez")
    if not np.any(a):
        raise PreconditionError("coefficients are all zero", "remez")
    return a


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def remez_bound(q_coeffs: Any, eps: float) -> float:
    """2^{d+1} ε / max|a| · (1 + log⁺(√d max|a| / ε))."""
    a = _coefficients(q_coeffs)
    d = a.shape[0]
    top = float(np.abs(a).max())
    return 2 ** (d + 1) * eps / top * (1 + max(0.0, math.log(math.sqrt(d) * top / eps)))


def _sample(rng: np.random.Generator, n: int, d: int, domain: str) -> np.ndarray:
    if domain == "cube":
        return rng.uniform(-1.0, 1.0, size=(n, d))
    direction = rng.standard_normal((n, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return direction * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)


@dataclass
class LevelEstimate:
    measure: float
    sigma: float
    fraction: float
    bound: float
    domain: str

    @property
    def within_bound(self) -> bool:
        return self.measure <= self.bound + 3 * self.sigma


def level_estimate(
    q_coeffs: Any,
    eps: float,
    n_mc: int,
    rng: np.random.Generator,
    domain: str = "ball",
) -> LevelEstimate:
    """Monte Carlo measure of {|q| <= ε} on the unit ball or [-1,1]^d, with its standard error."""
    if eps <= 0 or n_mc < 1:
        raise PreconditionError("need eps > 0 and n_mc >= 1", "remez")
    if domain not in DOMAINS:
        raise PreconditionError(f"domain must be one of {DOMAINS}", "remez")
    a = _coefficients(q_coeffs)
    d = a.shape[0]
    x = _sample(rng, n_mc, d, domain)
    values = np.einsum("ni,ij,nj->n", x, a, x)
    p = float(np.mean(np.abs(values) <= eps))
    volume = ball_volume(d) if domain == "ball" else 2.0**d
    sigma = volume * math.sqrt(p * (1 - p) / n_mc)
    return LevelEstimate(volume * p, sigma, p, remez_bound(a, eps), domain)


def quadratic_level_measure(
    q_coeffs: Any,
    eps: float,
    n_mc: int,
    rng: np.random.Generator,
    domain: str = "ball",
    normalized: bool = False,
) -> float:
    """
    Measure of {x : |q(x)| <= ε} in the domain, by Monte Carlo.

    By default this is the Lebesgue measure, the quantity the bound controls.
    With normalized=True it is the fraction of the domain instead: for
    q = x_1 x_2 on the cube that is ε(1 - log ε), about 0.056 at ε = 0.01,
    against 4ε(1 - log ε) unnormalized. Since {|2q| <= ε} = {|q| <= ε/2},
    doubling the coefficients halves the estimate up to the log factor.

    Raises:
        OracleMismatchError: If a ball estimate exceeds the bound by more than 3σ

    Example:
        ```python
        rng = np.random.default_rng(0)
        quadratic_level_measure({(0, 1): 1}, 1.0, 10_000, rng)                    # π
        quadratic_level_measure({(0, 1): 1}, 1.0, 10_000, rng, normalized=True)   # 1.0
        ```
    """
    est = level_estimate(q_coeffs, eps, n_mc, rng, domain)
    if domain == "ball" and not est.within_bound:
        raise OracleMismatchError(
            f"level-set measure {est.measure:.6g} exceeds the bound {est.bound:.6g}",
            "remez",
            {"sigma": est.sigma},
        )
    logger.debug("level measure %.6g (bound %.6g, sigma %.3g)", est.measure, est.bound, est.sigma)
    return est.fraction if normalized else est.measure
