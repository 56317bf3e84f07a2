"""Exception types raised by the verification routines."""


class YBEError(ValueError):
    """Base class for all domain errors in this package."""


class DimensionError(YBEError):
    pass


class NonUnimodularRatio(YBEError):
    """The spectral ratio is not a pure phase, so no real angle exists."""


class PoleAtDenominatorZero(YBEError):
    pass


class SingularConstraint(YBEError):
    """cos(theta1 - theta3) vanishes and the angle constraint has no solution."""


class NoUnimodularSolution(YBEError):
    pass


class LeakageExceedsTolerance(YBEError):
    """An operator maps the two-state basis out of its own span."""


class ReconstructionMismatch(YBEError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
