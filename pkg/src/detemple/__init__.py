"""Numerical and exact-algebra checks for R(x) = psi(x + 1/2) - ln x and the sequence H_n - ln(n + 1/2)."""

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    NonMonotoneError,
    StepSizeError,
)
from .extprec import ExtReal, ext_from

__version__ = "0.1.0"

__all__ = [
    "ExtReal",
    "ext_from",
    "DomainError",
    "ConvergenceError",
    "BracketError",
    "NonMonotoneError",
    "StepSizeError",
    "__version__",
]
