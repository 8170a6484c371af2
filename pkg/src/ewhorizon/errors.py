"""Exception types shared across the package."""


class EwhError(Exception):
    """Base class for all package errors."""


class DomainError(EwhError):
    """Argument outside the mathematical domain of a special function."""


class SingularJetError(EwhError):
    """Jet operation hit a singular point (zero divisor, domain edge)."""


class DegenerateMetricError(EwhError):
    """Metric determinant too close to zero to invert."""


class PoleProximityError(EwhError):
    """Evaluation point too close to a pole of an elliptic function."""

    def __init__(self, message, nearest_pole=None):
        super().__init__(message)
        self.nearest_pole = nearest_pole


class WindowError(EwhError):
    """Requested evaluation window is outside a family's admissible range."""


class PathBranchError(EwhError):
    """Integration path touches a branch point of a closed-form solution."""


class AccuracyError(EwhError):
    """Quadrature or series did not reach the requested accuracy."""

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class StiffnessError(EwhError):
    """Adaptive step size underflowed; the problem looks stiff or singular."""
