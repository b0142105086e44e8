"""
Abstract base class for manifold families.

A manifold family produces a parametrized map Φ: Q^n -> Hom(V, E), the
quasi-norms on V and E, and a finite family of candidate subspaces for
the ratio maximization. Everything downstream (tau, pencils, sampling
for the empirical checks, JSON emission) works through this interface.

Structure:
- ManifoldFamilyBase: Abstract methods that MUST be implemented
- DefaultImplementationsMixin: Default implementations that CAN be overridden
- ManifoldFamily: Combined class for subclassing
"""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any

import numpy as np

from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.base.types import CandidateStrategy, TauResult
from diophantine_exponents.common.exceptions import UnsupportedError
from diophantine_exponents.common.utils import RationalSampler
from diophantine_exponents.exponents.pencil import (
    GenericPoints,
    ParametrizedMap,
    Pencil,
    PencilCertificate,
    PolyMap,
    QuasiNorm,
    extremal_value,
    pencil_contains,
    tau_candidates,
)

logger = logging.getLogger(__name__)

Candidates = list[tuple[str, Subspace]]


# =============================================================================
# Abstract Base - Methods that MUST be implemented by each family
# =============================================================================


class ManifoldFamilyBase(ABC):
    """Abstract methods every manifold family MUST implement."""

    @abstractmethod
    def poly_map(self) -> ParametrizedMap:
        """The parametrized map; exact evaluation at rational points."""
        pass

    @abstractmethod
    def source_norm(self) -> QuasiNorm:
        pass

    @abstractmethod
    def target_norm(self) -> QuasiNorm:
        pass

    @abstractmethod
    def candidates(self, strategy: CandidateStrategy | None = None) -> Candidates:
        """
        Candidate subspaces of V, labelled.

        Raises:
            UnsupportedError: If the family does not provide the strategy
        """
        pass


# =============================================================================
# Default Implementations Mixin - CAN be overridden by families
# =============================================================================


class DefaultImplementationsMixin:
    """Default implementations that work for any polynomial family."""

    def generic_points(self, sampler: RationalSampler) -> GenericPoints:
        return GenericPoints(
            self.poly_map(),  # type: ignore[attr-defined]
            sampler,
            initial=self.config.get("initial_samples", 5),  # type: ignore[attr-defined]
            rounds=self.config.get("stabilize_rounds", 3),  # type: ignore[attr-defined]
        )

    def tau(self, sampler: RationalSampler, strategy: CandidateStrategy | None = None) -> TauResult:
        """
        Max ψ_M/φ_M over this family's candidates.

        Example:
            ```python
            family = create_manifold("heisenberg", {"k": 3})
            family.tau(RationalSampler(seed=1)).value   # Fraction(4, 1)
            ```
        """
        return tau_candidates(
            self.poly_map(),  # type: ignore[attr-defined]
            self.source_norm(),  # type: ignore[attr-defined]
            self.target_norm(),  # type: ignore[attr-defined]
            self.candidates(strategy),  # type: ignore[attr-defined]
            self.generic_points(sampler),
        )

    def contains(self, pencil: Pencil, sampler: RationalSampler) -> PencilCertificate:
        return pencil_contains(
            self.poly_map(),  # type: ignore[attr-defined]
            pencil,
            self.source_norm(),  # type: ignore[attr-defined]
            self.target_norm(),  # type: ignore[attr-defined]
            self.generic_points(sampler),
        )

    def extremal_value(self) -> Fraction:
        return extremal_value(self.source_norm(), self.target_norm())  # type: ignore[attr-defined]

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        """Φ at a uniform real parameter point in [-1, 1]^n, as a float matrix."""
        phi_map = self.poly_map()  # type: ignore[attr-defined]
        return phi_map.evaluate_float(rng.uniform(-1.0, 1.0, size=phi_map.n_params))

    def grading(self) -> list[int] | None:
        """Degree of each source coordinate, when the family is graded."""
        return None

    def manifold_json(self) -> dict[str, Any]:
        """The same JSON a user could write by hand for this family."""
        phi_map = self.poly_map()  # type: ignore[attr-defined]
        if not isinstance(phi_map, PolyMap):
            phi_map = phi_map.to_poly_map()
        payload: dict[str, Any] = {
            "name": self.id,  # type: ignore[attr-defined]
            "n_params": phi_map.n_params,
            "dim_v": phi_map.dim_v,
            "dim_e": phi_map.dim_e,
            "weights_v": self.source_norm().to_json(),  # type: ignore[attr-defined]
            "weights_e": self.target_norm().to_json(),  # type: ignore[attr-defined]
            "entries": phi_map.to_json(),
        }
        grading = self.grading()
        if grading is not None:
            payload["grading"] = grading
        payload["candidates"] = self._candidates_json()
        return payload

    def _candidates_json(self) -> dict[str, Any]:
        strategy = self.default_strategy  # type: ignore[attr-defined]
        if strategy is CandidateStrategy.FLAG:
            return {"strategy": "flag", "flag_order": list(range(self.source_norm().dim))}  # type: ignore[attr-defined]
        if strategy is CandidateStrategy.GRADED:
            return {"strategy": "graded"}
        return {
            "strategy": "explicit",
            "subspaces": [w.basis.to_json() for _, w in self.candidates(strategy)],  # type: ignore[attr-defined]
        }


# =============================================================================
# ManifoldFamily - Main class combining abstract + defaults
# =============================================================================


class ManifoldFamily(ManifoldFamilyBase, DefaultImplementationsMixin):
    """
    Base class for manifold families.

    Subclasses must implement all abstract methods from ManifoldFamilyBase.
    Default implementations from DefaultImplementationsMixin can be overridden.

    Example:
        ```python
        family = create_manifold("veronese", {"p": 3, "s": 2})
        result = family.tau(RationalSampler(seed=7))
        ```
    """

    # === Class Attributes (override in subclass) ===

    id: str = ""
    name: str = ""
    default_strategy: CandidateStrategy = CandidateStrategy.GRADED
    strategies: tuple[CandidateStrategy, ...] = (CandidateStrategy.GRADED,)

    def __init__(self, config: dict[str, Any] | None = None) -> None:
        """
        Args:
            config: Family parameters plus the sampling options
                initial_samples and stabilize_rounds
        """
        self.config = dict(config or {})
        self._poly_map: ParametrizedMap | None = None

    def poly_map(self) -> ParametrizedMap:
        if self._poly_map is None:
            self._poly_map = self._build_map()
        return self._poly_map

    def _build_map(self) -> ParametrizedMap:
        raise NotImplementedError

    def _resolve(self, strategy: CandidateStrategy | str | None) -> CandidateStrategy:
        resolved = CandidateStrategy(strategy) if strategy is not None else self.default_strategy
        if resolved not in self.strategies:
            raise UnsupportedError(f"{self.id} does not provide {resolved.value} candidates", "family")
        return resolved

    def parameters(self) -> dict[str, Any]:
        return {k: v for k, v in self.config.items() if k not in ("initial_samples", "stabilize_rounds")}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.parameters()})"
