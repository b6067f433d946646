"""Exception hierarchy shared across the package."""


class HitSongError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HitSongError):
    """Bad or unreadable configuration (config file, stopword override, CLI flags)."""


class SchemaError(HitSongError):
    """Input CSV does not expose the required columns."""


class DataError(HitSongError):
    """Data is unusable for the requested operation (empty corpus, single class, ...)."""


class ParameterError(HitSongError, ValueError):
    """Invalid argument or hyperparameter value."""


class ConsistencyError(HitSongError):
    """Internally inconsistent inputs (column mismatch, missing topic assignment, ...)."""


class TrainingError(HitSongError):
    """Model training failed (e.g. the loss diverged)."""
