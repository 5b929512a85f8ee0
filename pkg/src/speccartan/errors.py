"""Exception hierarchy shared by every module."""


class SpecCartanError(Exception):
    """Base class for all library failures."""


class ConvergenceError(SpecCartanError):
    """An iterative solver ran out of budget.

    ``residual`` carries the last measured residual so callers can judge how
    far off the iteration was.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NonFiniteError(SpecCartanError, ValueError):
    """Input contained NaN or Inf entries."""


class ClusterError(SpecCartanError):
    """Eigenvalue clusters could not be resolved or a disc precondition failed."""


class DomainError(SpecCartanError):
    """A spectrum left the declared planar domain."""


class PreconditionError(SpecCartanError):
    """A documented precondition (fixed point, derivative, normality...) failed.

    ``deviation`` records the measured violation.
    """

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation
