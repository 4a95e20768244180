"""Exception hierarchy shared by all sweatkit modules.

The CLI maps these onto exit codes: ConfigError -> 1, DataError (and
subclasses) -> 2, OSError -> 3.
"""


class SweatKitError(Exception):
    """Base class for all sweatkit errors."""


class ConfigError(SweatKitError):
    """Invalid run configuration. Carries every validation error found."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class DataError(SweatKitError):
    """Bad input data: malformed files, degenerate statistics, etc."""


class FormatError(DataError):
    """A data file violates its declared format."""


class VocabularyError(DataError):
    """Required words are missing from a vocabulary or frequency table."""

    def __init__(self, message, missing=()):
        self.missing = sorted(missing)
        super().__init__(message)
