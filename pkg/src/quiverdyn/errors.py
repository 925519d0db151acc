"""Exception and warning types shared across the package."""


class QuiverError(Exception):
    """Base class for all package errors."""


class InvalidQuiver(QuiverError, ValueError):
    """Matrix is not a valid quiver (not square, not skew-symmetric, ...)."""


class IndexOutOfRange(QuiverError, IndexError):
    pass


class InvalidParams(QuiverError, ValueError):
    pass


class NotPeriodic(QuiverError):
    pass


class NonLaurentResult(QuiverError, ArithmeticError):
    """Exact division in the Laurent ring left a remainder."""


class BudgetExceeded(QuiverError):
    pass


class RankZero(QuiverError, ValueError):
    pass


class NotReducible(QuiverError, ValueError):
    """Form has maximal rank, so there is nothing to reduce."""


class FiberMismatch(QuiverError):
    """Two lifts of the same reduced point project to different images."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonUnimodularLift(UserWarning):
    """No unimodular pivot block: lifting falls back to big floats."""


class InvarianceViolation(QuiverError):
    """A map fails to preserve a structure at a specific point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
