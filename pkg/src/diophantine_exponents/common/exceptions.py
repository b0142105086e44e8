"""
Custom exceptions for the diophantine exponents library.

Exception hierarchy:
    DiophantineError (base)
    ├── ValidationError
    │   ├── DimensionMismatchError
    │   ├── FlagNotNestedError
    │   ├── InvalidStructureError
    │   ├── NotGeneratingError
    │   ├── SchemaError
    │   └── PreconditionError
    ├── UnsupportedError
    ├── GuardExceededError
    ├── NumericalError
    ├── UniquenessViolationError
    └── OracleMismatchError

IrrationalLawsWarning is a UserWarning, not an exception: it is escalated
to a failure only by the CLI's --strict flag.
"""

from typing import Any


class DiophantineError(Exception):
    """Base exception for all diophantine exponent errors."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.message = message
        self.context = context  # Module/operation that raised
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.context:
            return f"[{self.context}] {self.message}"
        return self.message

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable error object used by the CLI."""
        return {
            "type": type(self).__name__,
            "message": self.message,
            "context": self.context,
            "details": {k: str(v) for k, v in self.details.items()},
        }


# === Validation Errors ===


class ValidationError(DiophantineError):
    """Input violates a documented precondition."""

    pass


class DimensionMismatchError(ValidationError):
    """Ambient dimensions or matrix shapes do not agree."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        expected: int | None = None,
        actual: int | None = None,
    ) -> None:
        super().__init__(message, context, {"expected": expected, "actual": actual})
        self.expected = expected
        self.actual = actual


class FlagNotNestedError(ValidationError):
    """A flag of subspaces is not increasing."""

    def __init__(self, message: str, context: str | None = None, position: int | None = None) -> None:
        super().__init__(message, context, {"position": position})
        self.position = position


class InvalidStructureError(ValidationError):
    """Structure constants violate antisymmetry, Jacobi or nilpotency."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        triple: tuple[int, ...] | None = None,
    ) -> None:
        super().__init__(message, context, {"triple": triple})
        self.triple = triple


class NotGeneratingError(ValidationError):
    """A subspace does not generate the Lie algebra."""

    pass


class SchemaError(ValidationError):
    """Malformed or schema-invalid JSON input."""

    def __init__(self, message: str, context: str | None = None, path: str | None = None) -> None:
        super().__init__(message, context, {"path": path})
        self.path = path


class PreconditionError(ValidationError):
    """Parameter guard of a closed formula or routine violated."""

    pass


# === Runtime Errors ===


class UnsupportedError(DiophantineError):
    """Requested feature or family is not supported."""

    pass


class GuardExceededError(DiophantineError):
    """Enumeration box exceeds the configured size guard."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        size: int | None = None,
        guard: int | None = None,
    ) -> None:
        super().__init__(message, context, {"size": size, "guard": guard})
        self.size = size
        self.guard = guard


class NumericalError(DiophantineError):
    """Floating-point classification is ambiguous or a fit is degenerate."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        condition_number: float | None = None,
    ) -> None:
        super().__init__(message, context, {"condition_number": condition_number})
        self.condition_number = condition_number


class UniquenessViolationError(DiophantineError):
    """Two distinct argmax subspaces share the maximal dimension."""

    def __init__(
        self,
        message: str,
        context: str | None = None,
        dimension: int | None = None,
        value: Any = None,
    ) -> None:
        super().__init__(message, context, {"dimension": dimension, "value": value})
        self.dimension = dimension
        self.value = value


# === Warnings ===


class IrrationalLawsWarning(UserWarning):
    """Laws subspace has suspiciously large-height rational entries."""

    pass


class OracleMismatchError(DiophantineError):
    """Two independent algorithms for the same quantity disagree."""

    pass
