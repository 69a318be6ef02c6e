"""Error tags raised by the analysis modules.

Every exception carries ``tag`` (the class name), which the CLI prints on the
diagnostic stream for computational failures.
"""


class QShockError(Exception):
    """Base class for all computational errors in the package."""

    @property
    def tag(self) -> str:
        return type(self).__name__


class DegenerateGradient(QShockError, ArithmeticError):
    """Density gradient too small for the pointwise dQ/drho ratio."""


class EllipticRegime(QShockError, ArithmeticError):
    """rho * Q_rho < 0: characteristic speeds are complex."""

    def __init__(self, message: str, value=None):
        super().__init__(message)
        self.value = value


class EigvecUndefined(QShockError, ArithmeticError):
    """Q_rho == 0: eigenvector first component diverges.

    The (coincident) eigenvalues are still available on the exception.
    """

    def __init__(self, message: str, lambda_plus=None, lambda_minus=None):
        super().__init__(message)
        self.lambda_plus = lambda_plus
        self.lambda_minus = lambda_minus


class GridMismatch(QShockError, ValueError):
    pass


class NoRootInHorizon(QShockError):
    pass


class DegenerateLaunch(QShockError, ValueError):
    pass


class NoCrossing(QShockError):
    pass


class NegativeRadicand(QShockError, ArithmeticError):
    pass


class BoundaryLeak(QShockError):
    """Wave function reached the guard band; enlarge the domain."""


class PhaseUnwrapAmbiguity(QShockError):
    pass


class BelowDensityFloor(QShockError, ValueError):
    pass
