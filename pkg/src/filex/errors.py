"""Exception types shared across the package."""


class FilexError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(FilexError, ValueError):
    """A process or sweep parameter violates its constraints."""


class InvalidInputError(FilexError, ValueError):
    """An operation received data outside its domain."""


class UndefinedCorrelationError(FilexError, ValueError):
    """Rank correlation is undefined, e.g. one series is constant."""


class ConfigError(FilexError):
    """A configuration file is malformed or incomplete (usage error, exit code 2)."""


class CsvFormatError(FilexError):
    """A records CSV could not be parsed."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"parse error at line {line_number}: {message}")
        self.line_number = line_number
