"""
Common utilities and helpers.

This module contains:
- Exceptions: error hierarchy
- Logger: logging configuration
- Utils: rational codec, seeded sampler, thread map
"""

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
from diophantine_exponents.common.logger import get_logger, setup_logger
from diophantine_exponents.common.utils import (
    RationalSampler,
    format_float,
    format_rational,
    parse_rational,
    thread_map,
)

__all__ = [
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
    "get_logger",
    "setup_logger",
    "RationalSampler",
    "format_float",
    "format_rational",
    "parse_rational",
    "thread_map",
]
