"""Exception types shared across the package."""


class TaildepError(Exception):
    """Base class for all package errors."""


class DomainError(TaildepError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergentMomentError(DomainError):
    """Requested exponential moment does not exist (t outside finiteness window)."""


class DataError(TaildepError, ValueError):
    """Input data failed validation (bad cell, too few rows, non-finite value)."""


class LikelihoodError(TaildepError, ArithmeticError):
    """A likelihood contribution is non-finite or non-positive."""


class NonConvergenceError(TaildepError, RuntimeError):
    """An iterative routine exhausted its budget without converging."""
