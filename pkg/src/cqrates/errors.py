"""Exception hierarchy shared across the package."""


class CqratesError(Exception):
    """Base class for all package errors."""


class DomainError(CqratesError, ValueError):
    """An argument lies outside the domain of the operation."""


class RegimeError(DomainError):
    """An asymptotic formula was evaluated outside its stated validity regime."""


class FeasibilityError(DomainError):
    """An exhaustive computation would exceed its size cap."""


class NumericalError(CqratesError, ArithmeticError):
    """A numerical routine failed to meet its accuracy contract."""


class ConvergenceError(NumericalError):
    """An iterative optimizer hit its iteration cap.

    The best iterate found so far is kept on ``best`` so callers can still
    inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
