"""Exception hierarchy shared by the solver pipeline."""


class VortexError(Exception):
    """Base class for every error raised by vortexpath."""


class ConfigurationError(VortexError, ValueError):
    """Bad grid size, bad family arguments or a malformed run config."""


class GridMismatch(VortexError, ValueError):
    """Two fields (or a field and a grid) disagree on shape."""


class AdmissibilityError(VortexError):
    """A hypothesis of the a priori estimates fails, or s0 >= d somewhere.

    ``flag`` names the failing condition (e.g. ``"b_cd"``).
    """

    def __init__(self, message, flag=None):
        super().__init__(message)
        self.flag = flag


class DenominatorError(VortexError):
    """The cleared denominator D - t k s (d - s) is not positive everywhere."""


class ConvergenceError(VortexError):
    """Newton failed: iteration cap, damping floor or linear solve stagnation."""

    def __init__(self, message, residual_norm=float("nan"), iterations=0):
        super().__init__(message)
        self.residual_norm = residual_norm
        self.iterations = iterations


class PathFailure(VortexError):
    """Continuation step underflowed ``min_step``; keeps the accepted states."""

    def __init__(self, message, states=()):
        super().__init__(message)
        self.states = list(states)

    @property
    def last_good(self):
        return self.states[-1] if self.states else None


class ConsistencyError(VortexError):
    """Two independent exact computations disagree (an arithmetic bug)."""
