"""Exception hierarchy for bjkit.

Every error carries the process exit code the command-line front end uses for it.
"""

from typing import Optional


class BJKitError(Exception):
    """Base exception for all bjkit failures."""
    exit_code: int = 1


class ExprSyntaxError(BJKitError):
    """Expression text does not conform to the grammar."""
    exit_code = 2

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ExponentError(ExprSyntaxError):
    """Exponent is not a nonnegative integer."""


class CurveSyntaxError(BJKitError):
    """Curve literal could not be parsed."""
    exit_code = 2


class PoleProximityError(BJKitError):
    """A denominator vanished (up to the pole threshold) at an evaluation point."""
    exit_code = 3

    def __init__(self, message: str, point: Optional[complex] = None):
        super().__init__(message)
        self.point = point


class ZeroFunctionError(BJKitError):
    """The function is identically zero on the curve."""
    exit_code = 3


class ZeroOnCurveError(BJKitError):
    """The function has a zero on (or numerically near) the curve."""
    exit_code = 3

    def __init__(self, message: str, min_modulus: float = 0.0):
        super().__init__(message)
        self.min_modulus = min_modulus


class GeometryViolation(BJKitError):
    """Curve containment or radius preconditions do not hold."""
    exit_code = 3


class PreconditionError(BJKitError):
    """An operation was called outside its documented domain."""
    exit_code = 3


class ZeroPolynomialError(PreconditionError):
    """Polynomial is zero or has degree 0 where a positive degree is needed."""


class EmptyNormingSetError(BJKitError):
    """No norming points were found for a non-zero function."""
    exit_code = 3


class ConfigError(BJKitError):
    """Configuration file could not be loaded or failed validation."""
    exit_code = 3


class NonConvergentError(BJKitError):
    """An iterative numerical procedure exceeded its budget."""
    exit_code = 4


class SuiteFailure(BJKitError):
    """At least one verification check failed."""
    exit_code = 5
