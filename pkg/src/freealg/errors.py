"""Exception hierarchy with stable error codes.

Every error carries a ``code`` string that the CLI serializes verbatim; the
code defaults to the class name so renaming a class is a wire-format change.
"""


class FreeAlgError(Exception):
    code = "Error"

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        if "code" not in cls.__dict__:
            cls.code = cls.__name__


# scalars
class DivisionByZero(FreeAlgError, ZeroDivisionError):
    pass


class SpecMismatch(FreeAlgError, ValueError):
    pass


class NotPrime(FreeAlgError, ValueError):
    pass


# words
class EmptyWord(FreeAlgError, ValueError):
    pass


class BadMarker(FreeAlgError, ValueError):
    pass


# ncpoly
class ZeroPolynomial(FreeAlgError, ValueError):
    pass


class ZeroDivisorArg(FreeAlgError, ValueError):
    pass


class RankMismatch(FreeAlgError, ValueError):
    pass


class NotInPower(FreeAlgError, ValueError):
    pass


class ConstantTermPresent(FreeAlgError, ValueError):
    pass


class BadGenerator(FreeAlgError, ValueError):
    pass


class ExprSyntaxError(FreeAlgError, ValueError):
    code = "SyntaxError"

    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


# arithmetization / superstructure
class IndexOutOfRange(FreeAlgError, IndexError):
    pass


class BadIndex(FreeAlgError, ValueError):
    pass


class MalformedPair(FreeAlgError, ValueError):
    pass


# folog / interp
class SortError(FreeAlgError, TypeError):
    pass


class UnboundVariable(FreeAlgError, NameError):
    pass


class UnknownName(FreeAlgError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BadParams(FreeAlgError, ValueError):
    pass


class UnsupportedDomain(FreeAlgError, ValueError):
    pass


class SignatureMismatch(FreeAlgError, ValueError):
    pass


class NotWellDefined(FreeAlgError, ValueError):
    pass


class NotEquivalence(FreeAlgError, ValueError):
    pass


# bigpowers
class BadParam(FreeAlgError, ValueError):
    pass


class ZeroFactor(FreeAlgError, ValueError):
    pass


class BadExponent(FreeAlgError, ValueError):
    pass


class MarkerUnsafe(FreeAlgError, ValueError):
    pass


class DecodeError(FreeAlgError, ValueError):
    """Base for big-powers decode failures."""


class NoMarkerRun(DecodeError):
    pass


class InconsistentExponents(DecodeError):
    pass


class NotRankOne(DecodeError):
    pass


class ZeroInput(DecodeError):
    pass


class SyncMismatch(DecodeError):
    pass


class ChainBroken(DecodeError):
    pass


# centralizers
class NotProper(FreeAlgError, ValueError):
    pass


class WindowTooSmall(FreeAlgError, ValueError):
    pass


class NotMember(FreeAlgError, ValueError):
    pass


# basis
class NoSplit(FreeAlgError, ValueError):
    pass


class NotUnique(FreeAlgError, ValueError):
    pass
