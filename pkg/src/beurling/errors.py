"""Exception hierarchy shared by every module."""


class BeurlingError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(BeurlingError, ValueError):
    """An argument lies outside the domain of the operation (e.g. abscissa < 1)."""


class SignError(BeurlingError, ValueError):
    """A negative mass was supplied where an unsigned measure is required."""


class ParameterError(BeurlingError, ValueError):
    """A tuning parameter is invalid (non-positive tolerance, negative order, ...)."""


class RangeError(BeurlingError, ValueError):
    """A query falls outside the materialized range of a measure or sequence."""


class SizeError(BeurlingError, MemoryError):
    """A resource guard (atom count, sieve size) was exceeded."""


class DivergenceError(BeurlingError, ArithmeticError):
    """An integral diverges, or its tail cannot be bounded.

    ``bound`` carries the failing quantity when one is available.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class PreconditionError(BeurlingError, ValueError):
    """A numerical precondition (tail model, remainder path) is missing."""


class TailTooWeakError(PreconditionError):
    """The declared tail model does not decay fast enough for the requested order."""


class FitError(BeurlingError, ValueError):
    """A growth-exponent or density fit is degenerate."""


class ProfileError(BeurlingError, ValueError):
    """A remainder profile grid is too short or malformed."""


class NoDensityError(BeurlingError, ArithmeticError):
    """N(x)/x does not converge on the stored range, so no density a exists."""

    def __init__(self, message, slope=None):
        super().__init__(message)
        self.slope = slope
