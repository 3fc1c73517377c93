"""Exception types shared across the library."""


class MaglabError(Exception):
    """Base class for all domain errors."""


class NonSquareMatrix(MaglabError):
    pass


class NonFiniteEntry(MaglabError):
    pass


class UnsupportedFamily(MaglabError):
    pass


class InvalidParams(MaglabError):
    pass


class NonpositiveScale(MaglabError):
    pass


class ExponentOutOfRange(MaglabError):
    pass


class EmptySubset(MaglabError):
    pass


class InvalidMetric(MaglabError):
    """A distance matrix failed metric validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EigensolverFailure(MaglabError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class NotPositiveDefinite(MaglabError):
    """Raised when an operation requires a positive definite similarity matrix.

    Carries the spectrum diagnostics that triggered the refusal.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class IllConditioned(MaglabError):
    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class DegenerateQuadraticForm(MaglabError):
    pass


class InsufficientRecords(MaglabError):
    pass


class IndefiniteForm(MaglabError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotConverged(MaglabError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class Inconsistent(MaglabError):
    """The two positive-weighting certificates disagree beyond tolerance."""


class LevelNotPD(MaglabError):
    pass


class QuadratureDivergence(MaglabError):
    pass


class NegativeRatioOnly(MaglabError):
    pass
