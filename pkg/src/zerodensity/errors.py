"""Exception hierarchy shared by all modules.

Every error derives from :class:`ZeroDensityError`, so callers (the CLI in
particular) can map the whole family onto exit codes in one place.
"""


class ZeroDensityError(Exception):
    """Base class for all package errors."""


class DomainError(ZeroDensityError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class CapacityError(ZeroDensityError, ValueError):
    """A size or range limit of a table or algorithm was exceeded."""


class PrecisionError(ZeroDensityError, ArithmeticError):
    """The requested accuracy cannot be certified."""


class ParseError(ZeroDensityError, ValueError):
    """Malformed textual input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderError(ParseError):
    """Input values are not strictly ascending."""


class BracketError(ZeroDensityError, ValueError):
    """A root-finding bracket does not contain a sign change."""


class ConvergenceError(ZeroDensityError, ArithmeticError):
    """An iterative method exhausted its iteration budget."""


class ConfigError(ZeroDensityError, KeyError):
    """Missing or invalid configuration values."""

    def __str__(self):
        return str(self.args[0]) if self.args else "configuration error"
