"""Exception hierarchy shared by all qdtk modules."""


class QdtkError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QdtkError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(QdtkError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""


class ZeroPolynomial(ValidationError):
    pass


class DegenerateLeading(ValidationError):
    """Leading coefficient (in the solved variable) vanishes."""


class NonConvergence(NumericalError):
    pass


class NoConvergence(NumericalError):
    """Integration budget exhausted; ``partial`` carries the best value so far."""

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class ZeroFunction(ValidationError):
    pass


class IndeterminateResultant(ValidationError):
    pass


class DivisionByZero(ValidationError, ZeroDivisionError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class OnBoundary(ValidationError):
    pass


class OnBoundaryFiber(OnBoundary):
    pass


class OnBranchCut(ValidationError):
    pass


class PoleAtFiber(ValidationError):
    pass


class UnsupportedRegime(ValidationError):
    pass


class BranchTrackFailure(NumericalError):
    pass


class EmptyLocus(ValidationError):
    pass


class FactorUndefined(ValidationError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor
