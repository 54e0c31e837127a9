"""Exception hierarchy.

Every failure raised by the package derives from :class:`DetrepError`.
Input problems additionally derive from :class:`ValueError` so callers
that only care about bad arguments can catch those alone.
"""


class DetrepError(Exception):
    """Base class for all package errors."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(DetrepError, ValueError):
    """Malformed or out-of-contract input."""


class ZeroConstantTerm(InputError):
    pass


class DegreeViolation(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class SizeMismatch(InputError):
    pass


class NotSize2(InputError):
    pass


class NotSelfReversive(InputError):
    pass


class NotStable(InputError):
    pass


class NotRealZero(InputError):
    pass


class NotInComponent(InputError):
    pass


class NumericalError(DetrepError):
    """A numerical stage failed to meet its tolerance."""


class NoUnstableBracket(NumericalError):
    pass


class DegenerateResultant(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class NotPositiveDefiniteOnLine(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularP0(NumericalError):
    pass


class RankMismatch(NumericalError):
    def __init__(self, message="", witness=None, rank=None):
        super().__init__(message, witness)
        self.rank = rank


class KYPFailure(NumericalError):
    pass


class DenominatorMismatch(NumericalError):
    pass


class EvaluationMismatch(NumericalError):
    pass


class PipelineDiverged(NumericalError):
    pass


class SpanDeficient(NumericalError):
    pass


class StrictificationFailed(NumericalError):
    pass


class NonLinearM(NumericalError):
    pass


class VerificationFailed(NumericalError):
    pass
