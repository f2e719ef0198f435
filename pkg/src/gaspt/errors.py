"""Exception types shared across the package."""


class GasptError(Exception):
    """Base class for all package errors."""


class InvalidParamsError(GasptError):
    """Parameters violate a documented precondition."""


class NonConvergentError(GasptError):
    """A series or iteration failed to reach the requested tolerance."""


class OutOfRegionError(GasptError):
    """Arguments lie outside the supported evaluation region."""


class CoincidentPointsError(GasptError):
    """Source and field point coincide (r^2 = 0) or are numerically too close."""


class DegenerateTangentError(GasptError):
    """Curve tangent vanishes where a unit tangent/normal is required."""


class PointOnBoundaryError(GasptError):
    """Evaluation point lies on the curve where an off-curve routine was called."""


class IllConditionedError(GasptError):
    """Linear system condition estimate exceeds the safe threshold."""


class ExtrapolationDivergedError(GasptError):
    """Richardson extrapolation sequence is not Cauchy."""
