"""Exception types shared across the package.

Validation problems derive from ``ValueError`` and numerical failures from
``ArithmeticError``/``RuntimeError`` so callers can catch either family with
builtins; the CLI maps the two families to different exit codes.
"""


class SpikedError(Exception):
    """Base class for all package errors."""


class ParameterError(SpikedError, ValueError):
    """An argument lies outside the documented domain."""


class PoleError(ParameterError):
    """A function was evaluated at one of its poles."""


class RegimeError(ParameterError):
    """No expansion formula exists for the requested parameters."""


class DivergenceError(SpikedError, ArithmeticError):
    """A series fails its convergence test."""


class QuadratureError(SpikedError, RuntimeError):
    """Adaptive quadrature exhausted its budget before reaching tolerance."""

    def __init__(self, message, value=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ConvergenceError(SpikedError, RuntimeError):
    """Successive refinements of a numerical method disagree."""
