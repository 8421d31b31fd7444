"""Exception types shared across the package."""


class AxiswirlError(Exception):
    """Base class for package-specific failures."""


class DomainError(AxiswirlError, ValueError):
    """Evaluation requested outside the supported spatial domain."""


class BlowupTimeError(AxiswirlError, ValueError):
    """Evaluation requested at or beyond the final time."""


class InvariantViolation(AxiswirlError, RuntimeError):
    """A constructed field violated one of its structural guarantees."""


class QuadratureConvergenceError(AxiswirlError, RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget.

    Carries the best available estimate so callers can decide whether to
    accept it anyway.
    """

    def __init__(self, message, value, err_estimate):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class ConfigError(AxiswirlError, ValueError):
    """Bad run configuration or malformed input file."""
