"""Exception types raised by the library."""


class KrullError(Exception):
    """Base class for all library errors."""

    code = "KrullError"


class InputError(KrullError):
    """Bad input: malformed descriptor, element, chain or certificate."""

    code = "InputError"


class InvalidDescriptor(InputError):
    code = "InvalidDescriptor"


class ParseError(InputError):
    code = "ParseError"

    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class ShapeMismatch(InputError):
    code = "ShapeMismatch"


class PreconditionError(InputError):
    code = "PreconditionError"


class UnsupportedRing(KrullError):
    code = "UnsupportedRing"


class ResourceExhausted(KrullError):
    code = "ResourceExhausted"

    def __init__(self, message, caps=None):
        super().__init__(message)
        self.caps = dict(caps or {})


class CapExceeded(ResourceExhausted):
    code = "CapExceeded"


class ZeroDenominator(InputError):
    code = "ZeroDenominator"


class NotACollapse(InputError):
    code = "NotACollapse"


class NotADependence(InputError):
    code = "NotADependence"


class LeadingNotMonic(InputError):
    code = "LeadingNotMonic"


class BoundTooLow(KrullError):
    code = "BoundTooLow"


class MalformedDecomposition(InputError):
    code = "MalformedDecomposition"


class NotLocalCollapse(InputError):
    code = "NotLocalCollapse"


class NotComaximal(InputError):
    code = "NotComaximal"


class MalformedFraction(InputError):
    code = "MalformedFraction"


class InternalMismatch(KrullError):
    """Two independent procedures disagreed. Always a bug."""

    code = "InternalMismatch"


class MalformedWitness(InputError):
    code = "MalformedWitness"


class NotAnnihilator(InputError):
    code = "NotAnnihilator"


class CoefficientEscapesIdeal(InputError):
    code = "CoefficientEscapesIdeal"


class PreconditionBreach(InputError):
    code = "PreconditionBreach"


class NotARelation(InputError):
    code = "NotARelation"


class SaturationRefutes(InputError):
    code = "SaturationRefutes"


class NoUnitCoefficient(InputError):
    code = "NoUnitCoefficient"


class NotVariableTail(InputError):
    code = "NotVariableTail"


class NotExpressible(InputError):
    code = "NotExpressible"
