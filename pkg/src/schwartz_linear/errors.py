"""Exception hierarchy shared by the numerical modules."""

from __future__ import annotations


class SchwartzError(Exception):
    """Base class for all errors raised by schwartz_linear."""


class ConfigurationError(SchwartzError, ValueError):
    """Invalid configuration or incompatible operands."""


class BasisMismatchError(ConfigurationError):
    """Operands are expressed in different Hermite bases."""

    def __init__(self, message: str, expected: object = None, actual: object = None) -> None:
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class UnknownIdentifierError(ConfigurationError):
    """A builtin object id could not be parsed."""

    def __init__(self, identifier: str, kind: str) -> None:
        super().__init__(f"Unknown {kind} id '{identifier}'")
        self.identifier = identifier
        self.kind = kind


class InputError(SchwartzError, ValueError):
    """Non-finite sample, coordinate or matrix entry."""


class DomainError(SchwartzError, ValueError):
    """Hermite degree outside the configured range."""


class NotSchwartzAtResolution(SchwartzError):
    """A sampled family is not of class S at the configured order.

    Raised when the Hermite tail energy of a fitted column exceeds the
    configured tail fraction.
    """

    def __init__(self, column: tuple[int, ...], residual: float, threshold: float) -> None:
        super().__init__(
            f"Column {column} has tail residual {residual:.3e} above threshold {threshold:.3e}"
        )
        self.column = column
        self.residual = residual
        self.threshold = threshold


class IllConditionedBasis(SchwartzError):
    """A family matrix is too ill-conditioned to act as a basis."""

    def __init__(self, condition_number: float, bound: float) -> None:
        super().__init__(
            f"Condition number {condition_number:.3e} exceeds bound {bound:.3e}"
        )
        self.condition_number = condition_number
        self.bound = bound
