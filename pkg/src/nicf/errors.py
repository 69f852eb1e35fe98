"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Raised on malformed expression text; carries the byte offset."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class FieldMismatchError(ValueError):
    """Operands belong to different imaginary quadratic fields."""


class NonEuclideanFieldError(ValueError):
    """Operation requires d in {1, 2, 3, 7, 11}."""


class NeedMorePrecision(Exception):
    """Internal signal: the current working precision cannot decide the
    question (lattice cell, branch cut, divisor sign).  Callers escalate
    precision and retry; this never escapes the public API.
    """

    def __init__(self, reason: str = "") -> None:
        super().__init__(reason or "undecidable at current precision")
        self.reason = reason


class PrecisionExhausted(RuntimeError):
    """Escalation reached the hard precision cap without a decision."""

    def __init__(self, message: str, precision_bits: int = 0) -> None:
        super().__init__(message)
        self.precision_bits = precision_bits


class DivisionNearZero(PrecisionExhausted):
    """A divisor ball still contained zero at the precision cap."""


class DefiniteFormError(ValueError):
    """Hermitian form has nonnegative determinant where an indefinite
    form is required."""


class IsotropicFormError(ValueError):
    """Anisotropy hypothesis fails; the requested bounds do not apply."""


class PoleMismatchError(ValueError):
    """Matrix does not send the given point to infinity."""
