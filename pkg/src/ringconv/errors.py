"""Exception hierarchy shared by every module of the package."""


class RingConvError(Exception):
    """Base class for all errors raised by ringconv."""


class NotAUnit(RingConvError, ArithmeticError):
    pass


class ZeroInverse(RingConvError, ZeroDivisionError):
    pass


class NotPrime(RingConvError, ValueError):
    pass


class NonUnitLeading(RingConvError, ArithmeticError):
    pass


class AllZero(RingConvError, ValueError):
    pass


class NotRegular(RingConvError, ValueError):
    pass


class NonUnitDenominator(RingConvError, ValueError):
    pass


class ShapeError(RingConvError, ValueError):
    pass


class RankDeficient(RingConvError, ValueError):
    pass


class RankDeficientProjection(RankDeficient):
    """The mod-p projection of a matrix over Z_{p^r} lost full row rank."""


class ZeroRow(RingConvError, ValueError):
    pass


class NonPolynomialResult(RingConvError, ArithmeticError):
    pass


class CoefficientOutOfA(RingConvError, ValueError):
    pass


class InternalCheckFailed(RingConvError, AssertionError):
    """An internal verification step failed; this indicates a bug."""


class LiftVerificationFailed(RingConvError, ArithmeticError):
    pass


class HypothesisViolation(RingConvError, ValueError):
    pass


class DirectSumViolation(RingConvError, ValueError):
    pass


class Inconclusive(RingConvError):
    """A bounded search found nothing within its bound; not a proof of absence."""


class ParseError(RingConvError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)


class SemanticError(ParseError):
    pass


class CertificateMismatch(RingConvError):
    pass
