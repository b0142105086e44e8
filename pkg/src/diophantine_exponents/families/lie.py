"""
Evaluation maps of relatively free Lie algebras.

For a rational nilpotent Lie algebra g of step s and k letters, the map
sends a k-tuple (X_1, …, X_k) in g^k to x: F_{k,g} -> g, w ↦ w(X_1, …, X_k).
The source F_{k,g} is spanned by the complement words of the laws
ideal, ordered highest degree first with weight = degree; the target is
g with its metric weights, sorted non-increasing. The exponent of
k random elements is then τ / η with η the growth exponent of F_{k,g}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

import numpy as np
import sympy

from diophantine_exponents.algebra.freelie import FreeLieBasis
from diophantine_exponents.algebra.liealg import (
    LieAlgebra,
    RelativelyFree,
    algebra_metric,
    builtin_algebra,
    complement_basis,
    eval_matrix,
    free,
    growth_exponent,
    heisenberg,
    laws_ideal,
    metric_weights,
    split_tuple,
    u,
)
from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace
from diophantine_exponents.base.family import Candidates, ManifoldFamily
from diophantine_exponents.base.types import CandidateStrategy, ExponentValue, Side
from diophantine_exponents.common.exceptions import PreconditionError, SchemaError
from diophantine_exponents.common.utils import RationalSampler
from diophantine_exponents.exponents.pencil import PolyMap, QuasiNorm, graded_candidates, relatively_free_source_norm
from diophantine_exponents.exponents.repthy import free_beta, heisenberg_beta, step2_beta, us_beta

logger = logging.getLogger(__name__)

LAWS_SEED = 20240601


# =============================================================================
# Evaluation map
# =============================================================================


@dataclass
class LieEvaluationMap:
    """(X_1..X_k) ↦ [w(X) for w in words], rows permuted by target_order."""

    algebra: LieAlgebra
    k: int
    basis: FreeLieBasis
    words: tuple[int, ...]
    target_order: tuple[int, ...]

    @property
    def n_params(self) -> int:
        return self.k * self.algebra.dim

    @property
    def dim_v(self) -> int:
        return len(self.words)

    @property
    def dim_e(self) -> int:
        return self.algebra.dim

    def evaluate(self, params: Sequence[Fraction]) -> QMatrix:
        full = eval_matrix(self.algebra, self.basis, split_tuple(params, self.k, self.algebra.dim))
        return QMatrix.from_rows([[full[r, c] for c in self.words] for r in self.target_order], self.dim_v)

    def evaluate_float(self, params: np.ndarray) -> np.ndarray:
        return self.evaluate([Fraction(float(p)) for p in params]).to_numpy()

    def to_poly_map(self) -> PolyMap:
        """Symbolic form: entries are polynomials in the k·dim g coordinates."""
        g = self.algebra
        syms = sympy.symbols(f"p0:{self.n_params}")
        values: dict[tuple[int, ...], list[Any]] = {}
        for w in self.basis.words:
            split = self.basis.bracketing[w]
            if split is None:
                i = w[0] - 1
                values[w] = list(syms[i * g.dim : (i + 1) * g.dim])
            else:
                values[w] = _symbolic_bracket(g, values[split[0]], values[split[1]])
        columns = [values[self.basis.words[c]] for c in self.words]
        matrix = [[sympy.expand(col[r]) for col in columns] for r in self.target_order]
        return PolyMap.from_sympy(matrix, syms)


def _symbolic_bracket(g: LieAlgebra, a: Sequence[Any], b: Sequence[Any]) -> list[Any]:
    out: list[Any] = [sympy.Integer(0)] * g.dim
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y == 0:
                continue
            for k, c in g.bracket_basis(i, j):
                out[k] += sympy.Rational(c.numerator, c.denominator) * x * y
    return [sympy.expand(v) for v in out]


# =============================================================================
# Families
# =============================================================================


class LieFamily(ManifoldFamily):
    """
    Evaluation map of an arbitrary rational nilpotent Lie algebra.

    Config:
        algebra: LieAlgebra, its JSON, or a built-in spec such as "u(3)"
        k: Number of random elements
        riemannian: Target weights all 1 (default True); False uses the
            Carnot–Carathéodory weights declared in the algebra's metric
        seed: Seed for the laws computation
    """

    id = "lie"
    name = "Relatively free evaluation map"
    default_strategy = CandidateStrategy.GRADED
    strategies = (CandidateStrategy.GRADED,)

    def __init__(self, config: dict[str, Any] | None = None) -> None:
        super().__init__(config)
        self.k = int(self.config.get("k", 2))
        if self.k < 1:
            raise PreconditionError("k must be >= 1", f"families.{self.id}")

    # --- Algebra ---

    def algebra(self) -> LieAlgebra:
        spec = self.config.get("algebra")
        if isinstance(spec, LieAlgebra):
            return spec
        if isinstance(spec, dict):
            return LieAlgebra.from_json(spec)
        if isinstance(spec, str):
            return builtin_algebra(spec)
        raise SchemaError("lie family needs an 'algebra'", f"families.{self.id}", path="algebra")

    @cached_property
    def _algebra(self) -> LieAlgebra:
        return self.algebra()

    @cached_property
    def relatively_free(self) -> RelativelyFree:
        g = self._algebra
        sampler = RationalSampler(int(self.config.get("seed", LAWS_SEED)))
        rf = laws_ideal(g, self.k, g.step, sampler, int(self.config.get("stabilize_rounds", 3)))
        logger.info("F_{%d,%s} has graded dimensions %s", self.k, g.name, rf.quotient_dims)
        return rf

    @cached_property
    def _words(self) -> tuple[int, ...]:
        rf = self.relatively_free
        chosen = complement_basis(rf)
        return tuple(sorted(chosen, key=lambda j: -len(rf.basis.words[j])))

    @cached_property
    def _metric(self):
        g = self._algebra
        if self.config.get("riemannian", True):
            return metric_weights(g, riemannian=True)
        return algebra_metric(g)

    # --- ManifoldFamily ---

    def _build_map(self) -> LieEvaluationMap:
        rf = self.relatively_free
        return LieEvaluationMap(self._algebra, self.k, rf.basis, self._words, tuple(self._metric.target_order()))

    def grading(self) -> list[int]:
        words = self.relatively_free.basis.words
        return [len(words[j]) for j in self._words]

    def source_norm(self) -> QuasiNorm:
        return relatively_free_source_norm(self.grading())

    def target_norm(self) -> QuasiNorm:
        return QuasiNorm.of(self._metric.sorted_weights(), Side.TARGET)

    def candidates(self, strategy: CandidateStrategy | None = None) -> Candidates:
        self._resolve(strategy)
        return graded_candidates(self.grading())

    # --- Exponents ---

    def growth_exponent(self) -> int:
        return growth_exponent(self.relatively_free)

    def slice(self, degree: int) -> Subspace:
        """The degree-i slice of F_{k,g} in source coordinates."""
        grading = self.grading()
        return Subspace.coordinate([i for i, d in enumerate(grading) if d == degree], len(grading))

    def closed_form(self) -> ExponentValue | None:
        return None

    def beta(self, tau: Fraction | None) -> Fraction | None:
        return None if tau is None else tau / self.growth_exponent()


class HeisenbergFamily(LieFamily):
    """k random elements of the Heisenberg group of dimension 2n+1."""

    id = "heisenberg"
    name = "Heisenberg evaluation map"

    def algebra(self) -> LieAlgebra:
        return heisenberg(int(self.config.get("n", 1)))

    def closed_form(self) -> ExponentValue | None:
        n = int(self.config.get("n", 1))
        if n == 1:
            return heisenberg_beta(self.k) if self.k >= 2 else None
        return step2_beta(1, self.k, d1=2 * n) if self.k >= 2 * n else None


class UsFamily(LieFamily):
    """k random elements of the unipotent group of (s+1)x(s+1) upper triangular matrices."""

    id = "us"
    name = "U_s evaluation map"

    def algebra(self) -> LieAlgebra:
        return u(int(self.config.get("s", 2)))

    def closed_form(self) -> ExponentValue | None:
        s = int(self.config.get("s", 2))
        return us_beta(s, self.k) if s >= 2 and self.k >= s else None


class FreeNilpotentFamily(LieFamily):
    """k random elements of the free s-step nilpotent group on d generators."""

    id = "free"
    name = "Free nilpotent evaluation map"

    def algebra(self) -> LieAlgebra:
        return free(int(self.config.get("d", 2)), int(self.config.get("s", 2)))

    def closed_form(self) -> ExponentValue | None:
        d, s = int(self.config.get("d", 2)), int(self.config.get("s", 2))
        return free_beta(d, s, self.k) if d >= s and self.k >= d else None
