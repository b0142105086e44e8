"""
Base classes and shared types.

This module contains:
- Type definitions (dataclasses, enums) shared by every module
- ManifoldFamily: abstract base class for manifold families (base.family)
"""

from diophantine_exponents.base.types import (
    CandidateRow,
    CandidateStrategy,
    ExponentValue,
    Flag,
    Report,
    Side,
    SlopeFit,
    SystoleTrace,
    TauResult,
)

__all__ = [
    "CandidateRow",
    "CandidateStrategy",
    "ExponentValue",
    "Flag",
    "Report",
    "Side",
    "SlopeFit",
    "SystoleTrace",
    "TauResult",
]
