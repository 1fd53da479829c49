"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class TimeChangeError(Exception):
    pass


class ParameterError(TimeChangeError, ValueError):
    """Invalid argument: nonpositive sizes, malformed grids, bad config."""


class DomainError(ParameterError):
    """Argument outside the region where a transform is defined."""


class UnsupportedDensityError(TimeChangeError):
    """The law has no density (point mass), so no closed-form oracle exists."""


class DataError(ParameterError):
    """Malformed or missing input file content."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericIntegrityError(TimeChangeError, ArithmeticError):
    pass


class EstimatorOverflowError(NumericIntegrityError):
    def __init__(self, omega, exponent, limit):
        super().__init__(
            f"max exponent {exponent:.6g} exceeds limit {limit:.6g} at omega={omega!r}; "
            "the frequency grid extends beyond what the sample tails support"
        )
        self.omega = omega
        self.exponent = exponent
        self.limit = limit


class InversionIntegrityError(NumericIntegrityError):
    pass
