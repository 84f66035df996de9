"""Exception hierarchy shared by every module."""


class ExtremeCycleError(Exception):
    """Base class for all errors raised by this package."""


class NotCoprime(ExtremeCycleError, ValueError):
    """The base and the modulus share a factor where a unit was required."""


class NotPrime(ExtremeCycleError, ValueError):
    pass


class OutOfRange(ExtremeCycleError, ValueError):
    """A cycle point candidate lies outside ``[1, m // (g - 1)]``."""


class DivisibilityViolation(ExtremeCycleError, ValueError):
    pass


class HypothesisViolation(ExtremeCycleError, ValueError):
    """Input is structurally invalid for a rule; this is never a verdict."""


class InvalidWord(ExtremeCycleError, ValueError):
    pass


class ResourceLimit(ExtremeCycleError, RuntimeError):
    """A configured ceiling (scan window, budget, divisor count) was exceeded."""
