"""Exception hierarchy for the bearing-only TMA toolkit."""


class TmaError(Exception):
    """Base class for all toolkit errors."""


class SaturationError(TmaError, ValueError):
    """A control input exceeded the observer's speed bound."""


class DegenerateGeometryError(TmaError, ValueError):
    """Target and observer coincide, so the bearing is undefined."""


class InvalidWeightError(TmaError, ValueError):
    """A row covariance could not be turned into a valid weight."""


class PivotDegenerateError(TmaError, ArithmeticError):
    """The last component of the augmented vector is too close to zero.

    ``state`` carries the estimator state to continue from (covariance
    advanced, estimate held), or ``None`` for batch solvers.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NonUniqueSolutionError(TmaError, ArithmeticError):
    """The smallest singular value of a TLS problem is (nearly) repeated."""


class RankDeficientError(TmaError, ArithmeticError):
    """A least-squares regressor matrix lacks full column rank."""
