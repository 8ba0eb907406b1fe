"""Exception hierarchy shared by the simulation modules."""


class QMemristorError(Exception):
    """Base class for all package errors."""


class ParameterError(QMemristorError, ValueError):
    """A physical parameter is outside its admissible domain."""


class UsageError(QMemristorError, ValueError):
    """An operation was called with an unsupported option or configuration."""


class NumericalError(QMemristorError, ArithmeticError):
    """A solver produced a non-finite value.

    Attributes
    ----------
    step : int
        Index of the first integration step that produced NaN or Inf.
    """

    def __init__(self, message, step):
        super().__init__(f"{message} (step {step})")
        self.step = step


class ConsistencyError(QMemristorError):
    """The memristor-form equations drifted from the operator identity."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class InsufficientDataError(QMemristorError):
    """Too few voltage zero crossings for loop analysis."""


class ConfigError(QMemristorError):
    """Malformed run configuration.

    Attributes
    ----------
    key : str or None
    line : int or None
        1-based line number in the configuration text.
    """

    def __init__(self, message, key=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.message = message
        self.key = key
        self.line = line
