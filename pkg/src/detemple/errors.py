"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(ArithmeticError):
    """An iterative or extrapolation procedure failed to settle."""


class BracketError(ArithmeticError):
    """A search interval does not bracket the expected extremum or root."""


class NonMonotoneError(ArithmeticError):
    """A predicate assumed monotone in a parameter changed sign more than once."""


class StepSizeError(ArithmeticError):
    """Finite-difference refinements disagree beyond tolerance."""
