"""Exception hierarchy shared across the package.

The CLI maps any :class:`SartexError` to exit code 2 (data/format error);
usage problems exit 1.
"""


class SartexError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SartexError):
    """A file does not conform to one of the supported on-disk formats."""


class TruncationError(FormatError):
    """A file header declares more payload than the file contains."""


class BoundsError(SartexError):
    """A chip window does not fit inside its source raster."""


class DomainError(SartexError):
    """A value lies outside the mathematical domain of an operation."""


class InputError(SartexError):
    """Inputs are malformed or mutually inconsistent."""


class TrainingError(SartexError):
    """A classifier could not be trained on the given data."""


class NotFittedError(SartexError):
    """An estimator was used before ``fit`` was called."""
