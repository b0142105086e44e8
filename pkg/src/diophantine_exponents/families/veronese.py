"""
Polynomials of degree <= p evaluated on s x s matrices.

V is the space of polynomials a_0 + a_1 t + … + a_p t^p, E = M_s, and
x_M(P) = P(M): the column for t^j is vec(M^j). The parameters are the
s² entries of M. Candidates are the degree flag V_0 ⊂ V_1 ⊂ … ⊂ V_p.
For a generic M the largest one-generator subalgebra Q[M] has dimension
m = s, and the exponent is max{0, (p+1-m)/m}.
"""

import sympy

from diophantine_exponents.base.family import Candidates, ManifoldFamily
from diophantine_exponents.base.types import CandidateStrategy, Side
from diophantine_exponents.common.exceptions import PreconditionError
from diophantine_exponents.exponents.pencil import PolyMap, QuasiNorm, flag_candidates
from diophantine_exponents.exponents.repthy import veronese_beta


class VeroneseFamily(ManifoldFamily):
    """
    Config:
        p: Polynomial degree (default 3)
        s: Matrix size (default 2)
    """

    id = "veronese"
    name = "Matrix Veronese map"
    default_strategy = CandidateStrategy.FLAG
    strategies = (CandidateStrategy.FLAG,)

    def __init__(self, config=None) -> None:
        super().__init__(config)
        self.p = int(self.config.get("p", 3))
        self.s = int(self.config.get("s", 2))
        if self.p < 1 or self.s < 1:
            raise PreconditionError("veronese needs p >= 1 and s >= 1", "families.veronese")

    def _build_map(self) -> PolyMap:
        syms = sympy.symbols(f"m0:{self.s * self.s}")
        m = sympy.Matrix(self.s, self.s, syms)
        power = sympy.eye(self.s)
        columns = []
        for _ in range(self.p + 1):
            columns.append([sympy.expand(v) for v in power])  # row-major vec
            power = power * m
        matrix = [[col[r] for col in columns] for r in range(self.s * self.s)]
        return PolyMap.from_sympy(matrix, syms)

    def source_norm(self) -> QuasiNorm:
        return QuasiNorm.uniform(self.p + 1, Side.SOURCE)

    def target_norm(self) -> QuasiNorm:
        return QuasiNorm.uniform(self.s * self.s, Side.TARGET)

    def candidates(self, strategy: CandidateStrategy | None = None) -> Candidates:
        self._resolve(strategy)
        return flag_candidates(list(range(self.p + 1)), self.p + 1)

    def expected(self):
        """max{0, (p+1-m)/m} with m = s."""
        return veronese_beta(self.p, self.s)
