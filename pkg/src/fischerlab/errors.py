"""Exception hierarchy shared by all modules."""


class FischerLabError(Exception):
    """Base class for package errors."""


class DimensionMismatchError(FischerLabError):
    """Operands live in different ambient dimensions."""


class InvalidInputError(FischerLabError):
    """An operation precondition is violated."""


class FormatError(FischerLabError):
    """A file or JSON object does not match the interchange format."""


class ConditioningError(FischerLabError):
    """A float-backend linear solve is too ill-conditioned to trust."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NumericalError(FischerLabError):
    """A numerical routine (SVD, root finding) failed to converge."""
