class QcorrError(Exception):
    """Base class for library errors."""


class InvalidArgument(QcorrError, ValueError):
    pass


class DomainError(QcorrError, ValueError):
    """A spectral function is undefined at some eigenvalue."""


class UnsupportedParameters(QcorrError, ValueError):
    """Closed-form path not defined for these parameters (e.g. lambda == 0)."""


class ConfigError(QcorrError, ValueError):
    """Invalid sweep configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
