"""Exception hierarchy shared by all modules."""


class MinDelayError(ValueError):
    """Base class for every error raised by this package."""


class InvalidGridError(MinDelayError):
    """Grid size is not a power of two or too small for the polynomial."""


class ZeroPolynomialError(MinDelayError):
    """Operation undefined for the identically zero polynomial."""


class DimensionMismatchError(MinDelayError):
    """Matrix dimensions of the operands disagree."""


class SingularOnCircleError(MinDelayError):
    """A matrix sample is singular (or numerically so) at a grid node."""

    def __init__(self, message, node=None, cond=None):
        super().__init__(message)
        self.node = node
        self.cond = cond


class InvalidBlaschkeError(MinDelayError):
    """A Blaschke zero lies on or outside the unit circle."""


class PaleyWienerError(MinDelayError):
    """Log-magnitude is not integrable on the grid (nonpositive sample)."""


class LogIntegralDivergenceError(PaleyWienerError):
    """A grid sample of the function is exactly zero."""


class NotComparableError(MinDelayError):
    """Inputs do not share the same gain, so the energy-delay comparison does not apply."""


class NotEqualGainError(NotComparableError):
    """Boundary magnitudes of two filters differ beyond tolerance."""


class NotMinimumPhaseError(MinDelayError):
    """The filter has a zero strictly inside the unit disk."""


class NotAProjectionError(MinDelayError):
    """Matrix is not an orthogonal projection."""


class BoundaryDegenerateError(MinDelayError):
    """Spectral density is not uniformly positive definite on the circle."""


class ConvergenceError(MinDelayError):
    """Iterative factorization failed to reach the requested residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
