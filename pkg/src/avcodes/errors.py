"""Exception hierarchy shared by all modules."""


class AVCodesError(Exception):
    """Base class for domain errors raised by this package."""


# gf
class NonPrimeCharacteristic(AVCodesError, ValueError):
    pass


class FieldTooLarge(AVCodesError, ValueError):
    pass


class MixedFields(AVCodesError, TypeError):
    pass


class DivisionByZero(AVCodesError, ZeroDivisionError):
    pass


# mpoly
class ZeroPolynomial(AVCodesError, ValueError):
    pass


class ArityMismatch(AVCodesError, ValueError):
    pass


# zbounds
class MethodArityMismatch(AVCodesError, ValueError):
    pass


class NoCaseApplies(AVCodesError, ArithmeticError):
    """No region condition of the two-variable closed forms holds."""


# avcode
class ExponentOutOfBox(AVCodesError, ValueError):
    pass


class DuplicatePoint(AVCodesError, ValueError):
    pass


class RankDeficient(AVCodesError, AssertionError):
    pass


class LengthMismatch(AVCodesError, ValueError):
    pass


class NotDivisorClosed(AVCodesError, ValueError):
    pass


# listdec
class RadiusInfeasible(AVCodesError, ValueError):
    pass


class NoCorrection(RadiusInfeasible):
    """Even ``E = 0`` fails the initial condition."""


class PlanMismatch(AVCodesError, ValueError):
    pass


class InternalNoKernel(AVCodesError, AssertionError):
    pass


class ListOverflow(AVCodesError, RuntimeError):
    pass
