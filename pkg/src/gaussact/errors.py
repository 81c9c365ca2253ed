"""Exception hierarchy."""


class GaussactError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(GaussactError, ValueError):
    pass


class DomainError(GaussactError, ValueError):
    """A parameter lies outside the domain of a formula or constructor."""


class UnphysicalState(GaussactError, ValueError):
    pass


class NonConvergence(GaussactError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidChannel(GaussactError, ValueError):
    pass


class CompletionFailure(GaussactError, ArithmeticError):
    """Symplectic completion of a dilation degenerated."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InfinityError(GaussactError, ArithmeticError):
    pass


class NoSolution(GaussactError, ValueError):
    pass


class NoFeasiblePoint(GaussactError, ValueError):
    pass


class NoActivation(GaussactError):
    """The activation gap is not positive anywhere in the search bracket."""
