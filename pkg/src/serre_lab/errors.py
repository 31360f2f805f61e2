"""Exception types shared across the package."""


class SerreLabError(ValueError):
    """Base class for input errors raised by this package."""


class SingularCurve(SerreLabError):
    pass


class BadCharacteristic(SerreLabError):
    pass


class NonElliptic(SerreLabError):
    pass


class OddLevel(SerreLabError):
    pass


class LevelTooLarge(SerreLabError):
    pass


class IndefiniteForm(SerreLabError):
    pass


class ParityMismatch(SerreLabError):
    pass


class InvalidConductor(SerreLabError):
    pass


class InadmissibleOrder(SerreLabError):
    pass


class EmptyFamily(SerreLabError):
    pass


class DegenerateParameter(SerreLabError):
    pass


class SingularInput(SerreLabError):
    pass
