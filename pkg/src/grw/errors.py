"""Exception types shared across the package."""


class GRWError(ValueError):
    """Base class for invalid input and unsupported requests."""


class NotPrime(GRWError):
    pass


class DegreeZero(GRWError):
    pass


class SizeBound(GRWError):
    """An object or enumeration would exceed a configured size cap."""


class ZeroInverse(GRWError, ZeroDivisionError):
    pass


class CtxMismatch(GRWError):
    """Operands live in different fields."""


class GroupMismatch(GRWError):
    pass


class NotCoprime(GRWError):
    pass


class BadModulus(GRWError):
    pass


class RangeError(GRWError):
    """Malformed group element tuple."""


class NotNormal(GRWError):
    pass


class NotSubgroup(GRWError):
    pass


class NotClosed(GRWError):
    pass


class EvenCharacteristic(GRWError):
    pass


class SmallCharacteristic(GRWError):
    pass


class UnsupportedCase(GRWError):
    """No theorem (or no supported construction) covers the requested case."""
