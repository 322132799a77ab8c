"""Exception hierarchy shared by all pfq modules."""


class PfqError(Exception):
    """Base class for library errors."""


class FieldError(PfqError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class ZeroElement(FieldError, ValueError):
    pass


class TowerMismatch(PfqError, ValueError):
    pass


class FactorizationTooLarge(FieldError):
    pass


class ElementSyntaxError(FieldError, ValueError):
    pass


class FormError(PfqError, ValueError):
    pass


class InvalidSlot(FormError):
    pass


class NoSharedFactor(FormError):
    pass


class OracleError(PfqError):
    pass


class ResidueChar2(OracleError):
    pass


class Degenerate(OracleError, ValueError):
    pass


class SingularInput(OracleError, ValueError):
    pass


class OddDimension(OracleError, ValueError):
    pass


class LinkageError(PfqError, ValueError):
    pass


class SharedSlotMismatch(LinkageError):
    pass


class WrongCharacteristic(LinkageError):
    pass


class NoAnisotropicVector(LinkageError):
    pass


class DimensionMismatch(LinkageError):
    pass


class InvalidMoveParameter(LinkageError):
    pass


class TowerLacksSqrtMinusOne(PfqError, ValueError):
    pass
