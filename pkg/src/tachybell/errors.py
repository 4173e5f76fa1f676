"""Exception types shared across the package."""


class TachybellError(Exception):
    """Base class for all package errors."""


class ConfigError(TachybellError):
    """Invalid configuration: bad value, violated invariant, unknown key."""


class DomainError(TachybellError):
    """Numerically or physically out-of-domain input (e.g. |beta| >= 1)."""


class DataFormatError(ConfigError):
    """Malformed input data file (CSV/JSON); carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
