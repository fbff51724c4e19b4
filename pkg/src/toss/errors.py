"""Exception types shared across the package."""


class TossError(Exception):
    """Base class for all errors raised by this package."""


class DataError(TossError):
    """Malformed or inconsistent input data (corpus, queries, sidecars)."""


class IndexFormatError(TossError):
    """Persisted artifact has the wrong magic, version, or layout."""


class ConfigMismatchError(TossError):
    """Artifact was built under a different preprocessing config."""


class AdapterError(TossError):
    """A model adapter subprocess failed or replied with an error."""


class UsageError(TossError):
    """Invalid arguments at an API or CLI boundary."""
