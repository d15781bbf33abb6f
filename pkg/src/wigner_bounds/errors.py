"""Exception hierarchy shared by the library and the command line front end."""


class WignerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(WignerError, ValueError):
    pass


class DomainError(WignerError, ValueError):
    pass


class NumericalConsistencyError(WignerError, ArithmeticError):
    pass


class InternalConsistencyError(NumericalConsistencyError):
    """Two independent evaluations of the same quantity disagreed."""


class ConvergenceError(NumericalConsistencyError):
    def __init__(self, message, off_norm):
        super().__init__(f"{message} (off-diagonal norm {off_norm:.3e})")
        self.off_norm = off_norm


class ConfigError(WignerError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
