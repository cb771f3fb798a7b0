"""Exception types shared across the package."""


class AgpolarError(Exception):
    """Base class for all library errors."""


class NotPrime(AgpolarError):
    """Field characteristic is not prime."""


class Reducible(AgpolarError):
    """A supplied modulus polynomial factors over the prime field."""


class DivideByZero(AgpolarError):
    """Division or inversion of the zero element."""


class FieldMismatch(AgpolarError):
    """Operands belong to different fields."""


class NotASquare(AgpolarError):
    """Field order is not a square of a prime power."""


class InvalidCurve(AgpolarError):
    """A curve descriptor violates a structural invariant."""


class SingularKernel(AgpolarError):
    """An evaluation matrix turned out singular."""


class TooLarge(AgpolarError):
    """A computation exceeds its documented enumeration cap."""


class OutOfRange(AgpolarError):
    """An index or probability argument is out of its valid range."""


class PreconditionViolated(AgpolarError):
    """A stated structural precondition does not hold."""


class NotSymmetric(AgpolarError):
    """The channel carries no SOF witness."""


class NotDecreasing(AgpolarError):
    """The monomial index set is not decreasing."""


class NoIsometry(AgpolarError):
    """No componentwise scaling realizes the nested-code duality."""


class LengthMismatch(AgpolarError):
    """A vector has the wrong length for the requested operation."""
