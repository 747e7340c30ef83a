"""Exception hierarchy shared by every module."""


class PoissonStieltjesError(Exception):
    """Base class for library errors."""


class DomainError(PoissonStieltjesError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ParameterError(PoissonStieltjesError, ValueError):
    """A control parameter (depth, tolerance, count, ...) is invalid."""


class AccuracyError(PoissonStieltjesError, ArithmeticError):
    """The requested tolerance could not be reached within the work budget.

    ``achieved`` carries the best error bound (or the last iterates) that
    was reached before giving up.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SpecError(PoissonStieltjesError, ValueError):
    """A JSON measure or coefficient document is malformed."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
