"""Exception hierarchy shared by the numerical modules and the CLI.

The CLI maps ``ConfigError``/``ParamError`` to exit code 2 and every
``NumericalError`` or ``DomainError`` raised during a sweep to exit code 3.
"""

from typing import Optional


class FracqError(Exception):
    """Base class for all errors raised by this project."""


class ParamError(FracqError, ValueError):
    """Parameters violate the invariants of a data type."""


class ConfigError(ParamError):
    """A configuration file or command-line value could not be used."""


class ParamParseError(ConfigError):
    """H-function parameter text could not be parsed."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class DomainError(FracqError, ValueError):
    """An argument lies outside the domain of an operation."""


class NumericalError(FracqError, ArithmeticError):
    """A numerical procedure could not deliver the requested result."""


class PoleError(NumericalError):
    """The gamma function was evaluated on one of its poles."""


class ConvergenceError(NumericalError):
    """A series did not reach its truncation criterion."""

    def __init__(self, message: str, terms: Optional[int] = None) -> None:
        super().__init__(message)
        self.terms = terms


class QuadratureError(NumericalError):
    """Adaptive quadrature did not meet its error tolerance."""


class ContourError(NumericalError):
    """A singularity lies too close to the inversion contour."""


class PoleOnPathError(NumericalError):
    """The integrand denominator vanishes on the integration path."""


class SingularityError(NumericalError):
    """A denominator vanishes at the requested point."""


class RegionError(NumericalError):
    """A series expansion was requested outside its convergence region."""


class UnsupportedError(NumericalError):
    """No available representation converges for the requested input."""


class BranchWarning(UserWarning):
    """Non-fatal diagnostic about branch choices and excluded orders."""
