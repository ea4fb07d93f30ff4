class LeibnizError(Exception):
    """Base class for every error raised by the backend."""

    exit_code = 1


class DivisionByZero(LeibnizError, ZeroDivisionError):
    pass


class MixedFields(LeibnizError, ValueError):
    pass


class AmbientMismatch(LeibnizError, ValueError):
    pass


class GatedCapability(LeibnizError):
    """The requested computation is not available for this input."""

    exit_code = 3


class BudgetExceeded(GatedCapability):
    pass


class InfiniteField(GatedCapability):
    pass


class FieldTooSmall(GatedCapability):
    pass


class NotAnIdeal(LeibnizError, ValueError):
    pass


class NotClosed(LeibnizError, ValueError):
    pass


class NotLie(LeibnizError, ValueError):
    pass


class NotBimodule(LeibnizError, ValueError):
    pass


class NotAbelianIdeal(LeibnizError, ValueError):
    pass


class PreconditionViolated(LeibnizError, ValueError):
    pass


class HypothesisViolated(PreconditionViolated):
    pass


class NoComplementNeeded(LeibnizError):
    pass


class TheoremViolated(LeibnizError, AssertionError):
    """A computed counterexample to a proven statement. Always a bug."""


class CertificationFailed(TheoremViolated):
    pass


class RetryBudgetExceeded(LeibnizError):
    pass


class ParseError(LeibnizError, ValueError):
    exit_code = 2


class NotLeibniz(ParseError):
    def __init__(self, message: str, triple=None):
        super().__init__(message)
        self.triple = triple
