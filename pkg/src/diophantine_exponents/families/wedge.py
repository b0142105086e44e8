"""
Wedge-product maps f(u_1, …, u_k) = Σ_{i<j} a_ij u_i ∧ u_j into R³.

V has basis a_ij (i < j, lexicographic), E = R³ and ∧ is the cross
product. The parameters are the coordinates of u_1, …, u_k. The
subspaces W_i spanned by the a_ij involving i have images in u_i^⊥,
so the manifold lies in the pencils P_{W_i, 2}; none of them is
constraining, and the maximum ratio is attained on V alone.
"""

import itertools

import sympy

from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.base.family import Candidates, ManifoldFamily
from diophantine_exponents.base.types import CandidateStrategy, Side
from diophantine_exponents.common.exceptions import PreconditionError
from diophantine_exponents.exponents.pencil import PolyMap, QuasiNorm


class WedgeFamily(ManifoldFamily):
    """
    Config:
        k: Number of vectors, >= 4 (default 4)
    """

    id = "wedge"
    name = "Wedge-product map"
    default_strategy = CandidateStrategy.EXPLICIT
    strategies = (CandidateStrategy.EXPLICIT,)

    def __init__(self, config=None) -> None:
        super().__init__(config)
        self.k = int(self.config.get("k", 4))
        if self.k < 4:
            raise PreconditionError("wedge needs k >= 4", "families.wedge")
        self.pairs = list(itertools.combinations(range(self.k), 2))

    def _build_map(self) -> PolyMap:
        syms = sympy.symbols(f"u0:{3 * self.k}")
        vectors = [sympy.Matrix(syms[3 * i : 3 * i + 3]) for i in range(self.k)]
        columns = [vectors[i].cross(vectors[j]) for i, j in self.pairs]
        matrix = [[sympy.expand(col[r]) for col in columns] for r in range(3)]
        return PolyMap.from_sympy(matrix, syms)

    def source_norm(self) -> QuasiNorm:
        return QuasiNorm.uniform(len(self.pairs), Side.SOURCE)

    def target_norm(self) -> QuasiNorm:
        return QuasiNorm.uniform(3, Side.TARGET)

    def pencil_subspace(self, i: int = 0) -> Subspace:
        """W_i = span{a_ij : j ≠ i} (0-based i)."""
        return Subspace.coordinate([n for n, pair in enumerate(self.pairs) if i in pair], len(self.pairs))

    def candidates(self, strategy: CandidateStrategy | None = None) -> Candidates:
        self._resolve(strategy)
        out = [(f"W{i + 1}", self.pencil_subspace(i)) for i in range(self.k)]
        out.append(("V", Subspace.full(len(self.pairs))))
        return out
