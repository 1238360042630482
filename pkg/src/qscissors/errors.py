"""Exception hierarchy shared by every qscissors module."""


class QsdError(Exception):
    """Base class for all errors raised by qscissors."""


class ConfigurationError(QsdError, ValueError):
    """Inputs are individually valid but cannot be combined (e.g. cutoff mismatch)."""


class UsageError(QsdError, ValueError):
    """An argument is outside the domain accepted by an operation."""


class InvalidPovmError(QsdError, ValueError):
    pass


class CutoffTooSmallError(ConfigurationError):
    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class DegenerateConfigurationError(QsdError, ArithmeticError):
    """The requested state has zero norm for the given parameters."""


class ImpossibleOutcomeError(DegenerateConfigurationError):
    """A click pattern whose conditioning probability is numerically zero."""
