"""
Diophantine exponents: exact almost-sure exponents of rational manifolds of
matrices and of rational nilpotent Lie groups, with empirical cross-checks.

Example:
    ```python
    from diophantine_exponents import RationalSampler, create_manifold

    family = create_manifold("heisenberg", {"k": 3})
    result = family.tau(RationalSampler(seed=1))
    result.value                    # Fraction(4, 1)
    family.beta(result.value)       # Fraction(4, 9)
    ```
"""

__version__ = "0.1.0"

from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace
from diophantine_exponents.base.family import ManifoldFamily
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
from diophantine_exponents.common.exceptions import (
    DiophantineError,
    DimensionMismatchError,
    FlagNotNestedError,
    GuardExceededError,
    InvalidStructureError,
    IrrationalLawsWarning,
    NotGeneratingError,
    NumericalError,
    OracleMismatchError,
    PreconditionError,
    SchemaError,
    UniquenessViolationError,
    UnsupportedError,
    ValidationError,
)
from diophantine_exponents.common.utils import RationalSampler
from diophantine_exponents.config import ExponentConfig, get_exponent_config, load_env
from diophantine_exponents.exponents.pencil import Pencil, PolyMap, QuasiNorm
from diophantine_exponents.factory import create_manifold, get_supported_families, register_family

__all__ = [
    "__version__",
    # Exact linear algebra
    "QMatrix",
    "Subspace",
    # Factory
    "ManifoldFamily",
    "create_manifold",
    "get_supported_families",
    "register_family",
    # Config
    "ExponentConfig",
    "get_exponent_config",
    "load_env",
    # Types
    "CandidateRow",
    "CandidateStrategy",
    "ExponentValue",
    "Flag",
    "Pencil",
    "PolyMap",
    "QuasiNorm",
    "RationalSampler",
    "Report",
    "Side",
    "SlopeFit",
    "SystoleTrace",
    "TauResult",
    # Exceptions
    "DiophantineError",
    "DimensionMismatchError",
    "FlagNotNestedError",
    "GuardExceededError",
    "InvalidStructureError",
    "IrrationalLawsWarning",
    "NotGeneratingError",
    "NumericalError",
    "OracleMismatchError",
    "PreconditionError",
    "SchemaError",
    "UniquenessViolationError",
    "UnsupportedError",
    "ValidationError",
]
