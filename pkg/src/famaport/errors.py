"""Exception types shared across the package."""


class FamaportError(Exception):
    """Base class for all package errors."""


class InvalidConfigError(FamaportError, ValueError):
    """Scenario parameters violate a constraint (e.g. P < 2, W <= 0)."""


class InvalidArgumentError(FamaportError, ValueError):
    """An operation argument is out of contract (bad index, empty set, ...)."""


class NumericDomainError(FamaportError, ArithmeticError):
    """A numerical precondition failed (e.g. Cholesky on a non-PD matrix)."""


class BudgetExceededError(FamaportError, RuntimeError):
    """The combinatorial guard of the exhaustive search was exceeded."""
