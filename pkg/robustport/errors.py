# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# errors.py - 예외 정의
# ==============================================================================

"""
Exception and warning types for robustport v1.0
"""


class RobustPortError(Exception):
    """Base class for all package errors."""


class DomainError(RobustPortError, ValueError):
    """An argument lies outside the domain of an operation."""


class SurfaceCoverageError(DomainError):
    """A solution surface does not cover the required state range."""


class RegionNotFoundError(DomainError):
    """A zero crossing of the feedback is missing from the grid."""


class ConfigError(RobustPortError, ValueError):
    """An invalid run configuration or parameter value."""


class CalibrationError(RobustPortError, ValueError):
    """A price series cannot be calibrated."""


class PriceParseError(RobustPortError, ValueError):
    """A malformed price file."""


class NumericalFailure(RobustPortError, ArithmeticError):
    """
    A numerical stage failed to produce finite or converged values.

    Attributes:
        stage (str): Name of the failing stage (e.g. "solve_f step 17")
        last_estimate (float): Last available estimate, if any
    """

    def __init__(self, message, stage=None, last_estimate=None):
        super().__init__(message)
        self.stage = stage
        self.last_estimate = last_estimate


class NumericalWarning(UserWarning):
    """Degraded numerical quality that does not stop a computation."""
