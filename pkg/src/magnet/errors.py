"""Exception hierarchy shared across the package.

ValidationError maps to CLI exit code 1, NumericalError to exit code 2.
"""


class MagnetError(Exception):
    pass


class ValidationError(MagnetError):
    """Bad configuration, file format, or argument values."""


class InvalidAssignmentError(ValidationError):
    """Attribute values outside the range allowed by the affinity matrices."""


class CapacityError(ValidationError):
    """Requested problem size exceeds a configured budget."""


class InsufficientDataError(ValidationError):
    """Not enough points for a fit or summary."""


class NumericalError(MagnetError):
    """Solver or iteration failed to reach the requested tolerance."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual
