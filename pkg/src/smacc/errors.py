"""Exception hierarchy shared across the package."""


class SmaccError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SmaccError):
    """Matrix or vector dimensions are incompatible with the operation."""


class SingularMatrixError(SmaccError):
    """A linear system has no unique solution over GF(2)."""


class ParamError(SmaccError):
    """System parameters are invalid or inconsistent."""


class DivisibilityError(ParamError):
    """The file size does not meet the case's subpacketization requirement."""


class NotCoprimeError(ParamError):
    """An operation requiring gcd(i, K) = 1 was called with gcd != 1."""


class CaseMismatchError(SmaccError):
    """An operation was invoked for a memory point it does not apply to."""


class LengthMismatchError(SmaccError):
    """Bit vectors that must have equal length do not."""


class SideInfoError(SmaccError):
    """Provided side information does not match the receiver's window."""


class DecodeError(SmaccError):
    """A user failed to reconstruct a key or a demanded file."""


class KeyExhaustedError(SmaccError):
    """Internal: delivery ran out of one-time keys (must never happen)."""


class TooLargeError(SmaccError):
    """An exhaustive enumeration would exceed the supported state space."""


class ExactnessError(SmaccError):
    """A quantity cannot be represented as an exact rational."""


class BoundViolatedError(SmaccError):
    """A proven bound failed numerically, indicating an implementation bug."""
