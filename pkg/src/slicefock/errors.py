"""Exception types shared across the library."""


class SliceFockError(Exception):
    """Base class for library-specific failures."""


class TruncationError(SliceFockError):
    """Series tail cannot be brought under tolerance at the degree cap."""


class IntegrandOverflowError(SliceFockError):
    """A quadrature integrand produced a non-finite sample."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotInSpaceError(SliceFockError):
    """Weighted norm diverges: the integrand grows toward the grid boundary
    or the value keeps increasing under grid refinement."""


class ConditioningError(SliceFockError):
    """A Gram matrix is too ill-conditioned to solve reliably."""

    def __init__(self, message, condition=None, leading_minor=None):
        super().__init__(message)
        self.condition = condition
        self.leading_minor = leading_minor


class SolverError(SliceFockError):
    """Iterative minimization did not converge; ``best`` carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
