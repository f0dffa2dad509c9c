"""Exception hierarchy shared by the package and mapped to CLI exit codes."""


class GrowthDecayError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class InvalidParameterError(GrowthDecayError, ValueError):
    """A model parameter violates its domain (e.g. a non-positive semi-period)."""


class DataError(GrowthDecayError, ValueError):
    """Malformed or inconsistent time-series data."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateYearError(ParseError):
    pass


class NonFiniteValueError(ParseError):
    pass


class EmptyDataError(DataError):
    pass


class InsufficientDataError(DataError):
    pass


class NonPositiveValueError(DataError):
    pass


class YearOutOfRegimeError(DataError):
    pass


class YearNotCoveredError(DataError):
    pass


class ParamsPartitionMismatchError(DataError):
    pass


class InfeasiblePartitionError(DataError):
    pass


class NonFiniteEvaluationError(GrowthDecayError, ArithmeticError):
    """The model returned NaN or infinity at a finite-difference probe."""


class FitError(GrowthDecayError, RuntimeError):
    """Every start of a multi-start fit failed."""

    exit_code = 3
