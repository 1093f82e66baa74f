"""Exception hierarchy shared by every module in the package."""


class MarkovError(ValueError):
    """Base class for all domain errors raised by mhrev."""


class EmptyMatrix(MarkovError):
    pass


class NegativeOffDiagonal(MarkovError):
    pass


class RowSumViolation(MarkovError):
    pass


class DimensionMismatch(MarkovError):
    pass


class NotIrreducible(MarkovError):
    pass


class ZeroTargetMass(MarkovError):
    pass


class InvalidDistribution(MarkovError):
    pass


class NotReversible(MarkovError):
    pass


class ZeroGap(MarkovError):
    pass


class UnreachableTarget(MarkovError):
    pass


class NonPositiveLambda(MarkovError):
    pass


class SameState(MarkovError):
    pass


class OverlappingSets(MarkovError):
    pass


class SingularSystem(MarkovError):
    pass


class NegativeTime(MarkovError):
    pass


class EpsilonOutOfRange(MarkovError):
    pass


class NotBirthDeath(MarkovError):
    pass


class NonPositiveAlpha(MarkovError):
    pass


class AlphaOutOfRange(MarkovError):
    pass


class NotMeanZero(MarkovError):
    pass


class NotStationary(MarkovError):
    pass


class DegenerateSupport(MarkovError):
    pass


class ZeroMass(MarkovError):
    pass


class ValidationFailure(MarkovError):
    """Closed-form and numeric results disagree; ``index`` names the offender."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ParseError(MarkovError):
    pass
