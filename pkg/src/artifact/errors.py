"""Exception types shared across modules."""

from __future__ import annotations

from .operad import ArityOverflow, OperadError

__all__ = [
    "ArityOverflow",
    "OperadError",
    "BudgetExceeded",
    "FlavorMismatch",
    "GammaLiftUndefined",
    "ObjectBoundExceeded",
    "VerificationFailure",
    "DegreeViolation",
    "NotStabilized",
    "TruncationWarning",
]


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, message: str, bound: int | None = None) -> None:
        super().__init__(message)
        self.bound = bound


class FlavorMismatch(ValueError):
    """Morphisms of different flavors or incompatible shapes were combined."""


class GammaLiftUndefined(ValueError):
    """A pointed square cannot be lifted because the bottom map hits 0 off the basepoint."""


class ObjectBoundExceeded(ValueError):
    """A computation needs an object beyond the truncation bound."""


class VerificationFailure(AssertionError):
    """A certificate check failed; ``witness`` holds the offending data."""

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


class DegreeViolation(ValueError):
    """A presentation does not vanish where the requested degree demands."""


class NotStabilized(RuntimeError):
    """Two consecutive budgets gave different answers."""


class TruncationWarning(UserWarning):
    """A truncated computation may differ from the untruncated one."""
