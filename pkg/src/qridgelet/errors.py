"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat:
config problems, data problems, and everything else.
"""


class QridgeletError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(QridgeletError, ValueError):
    """A scalar argument violates its precondition (non-finite, non-positive, ...)."""


class ShapeError(QridgeletError, ValueError):
    """Array dimensions do not match the operation's contract."""


class DegenerateDirectionError(QridgeletError, ValueError):
    """A ridgelet direction vector has (near-)zero norm and cannot be normalized."""


class UnsupportedModeError(QridgeletError, RuntimeError):
    """Operation requested in a mode that does not support it (e.g. gradients under shot sampling)."""


class ConfigError(QridgeletError):
    """A run configuration file is missing, malformed, or inconsistent."""


class DataError(QridgeletError):
    """Base class for ingestion problems."""


class MissingColumnError(DataError):
    """Input CSV lacks a required column."""


class EmptySeriesError(DataError):
    """Input CSV produced zero usable rows."""


class DegenerateScaleError(DataError):
    """Normalization region is constant; min-max scaling is undefined."""
