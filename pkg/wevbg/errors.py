"""
Exception hierarchy for wevbg.

Every error raised by the package derives from WevbgError. Errors caused by
bad input or configuration derive from ValidationError; the command line
maps those to exit code 1 and everything else to exit code 2.

Example:
    >>> from wevbg.errors import SelectionError, ValidationError
    >>> issubclass(SelectionError, ValidationError)
    True
"""


class WevbgError(Exception):
    """Base class for all wevbg errors."""


class ValidationError(WevbgError, ValueError):
    """Input or configuration rejected before computation."""


class ConfigError(ValidationError):
    """A run configuration failed validation."""


class DimensionError(ValidationError):
    """Vector, image or matrix shapes do not agree."""


class InsufficientData(ValidationError):
    """Too few observations for the requested operation."""


class InvalidInput(ValidationError):
    """A parameter is outside its allowed domain."""


class SelectionError(ValidationError):
    """An eigenvector selection does not fit the basis."""


class InvalidBlockSize(ValidationError):
    """Block size is not within the frame."""


class NotFound(ValidationError):
    """No input files matched."""


class FormatError(ValidationError):
    """An input file could not be decoded."""


class LabelError(ValidationError):
    """Frame labels are missing, duplicated or unknown."""


class InvalidMatrix(WevbgError, ValueError):
    """Matrix is not finite or not symmetric."""


class DegenerateInput(WevbgError, ValueError):
    """Input is degenerate (zero vector, empty population)."""


class InsufficientHistory(WevbgError):
    """A stream operation needs at least one absorbed observation."""


class ConvergenceError(WevbgError):
    """An iterative solver did not converge."""


class SkippedDegenerate(WevbgError):
    """Dominant eigenvalue is not simple; the measurement was skipped."""


class RegimeWarning(UserWarning):
    """Inputs are outside the regime a theoretical statement assumes."""
