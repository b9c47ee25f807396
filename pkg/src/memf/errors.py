"""Exception types raised across the package."""


class MemfError(Exception):
    """Base class for all package errors."""

    code = "E_MEMF"


class OrderOutOfRangeError(MemfError, ValueError):
    code = "E_ORDER_RANGE"


class MissingDerivativeError(MemfError):
    code = "E_MISSING_DERIVATIVE"


class AccuracyError(MemfError):
    """Quadrature failed to converge; the best estimate is kept on ``estimate``."""

    code = "E_ACCURACY"

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class MonotonicityError(MemfError):
    code = "E_NOT_MONOTONE"


class InvalidPartitionError(MemfError):
    code = "E_INVALID_PARTITION"


class NonFiniteResultError(MemfError, ArithmeticError):
    code = "E_NON_FINITE"


class ConjectureRangeError(MemfError):
    """A Hermite-envelope bound was requested outside the numerically checked range."""

    code = "E_CONJECTURE_RANGE"


class TruncationError(MemfError):
    code = "E_TRUNCATION"


class MajorantError(MemfError):
    """A caller-supplied tail majorant failed to dominate a sampled term."""

    code = "E_MAJORANT"
