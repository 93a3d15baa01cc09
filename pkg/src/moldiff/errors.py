"""Exception hierarchy.

Physics errors (bad inputs to a model, unresolvable grids, failed fits) derive
from :class:`PhysicsError`; the CLI maps them to exit code 2. Malformed input
files raise :class:`DataFormatError` (exit code 3).
"""


class MoldiffError(Exception):
    """Base class for all package errors."""


class PhysicsError(MoldiffError, ValueError):
    """A physics precondition was violated."""


class DomainError(PhysicsError):
    """Argument outside the domain of a physical relation (e.g. v <= 0)."""


class ResourceError(PhysicsError):
    """The requested discretization is too large to evaluate."""


class PreconditionError(PhysicsError):
    """Inputs are valid individually but not resolvable together."""


class ShapeError(PhysicsError):
    """A profile lacks the shape an operation requires (e.g. no half-max crossing)."""


class DecompositionError(PhysicsError):
    """A quadrature width decomposition would need a negative square."""


class FitError(PhysicsError):
    """A least-squares fit did not converge.

    Attributes
    ----------
    best_rms : float
        Residual RMS of the best parameters reached.
    """

    def __init__(self, message, best_rms=float("nan")):
        super().__init__(message)
        self.best_rms = best_rms


class ConfigError(MoldiffError, ValueError):
    """Invalid configuration key, value or unit."""


class DataFormatError(MoldiffError, ValueError):
    """An input data file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number of the offending row when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
