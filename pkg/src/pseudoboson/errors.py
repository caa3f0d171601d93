"""Exception types raised across the package."""


class PseudoBosonError(Exception):
    """Base class for all package errors."""


class DomainError(PseudoBosonError, ValueError):
    """Input lies outside the region where a quantity is defined."""


class DegenerateError(PseudoBosonError, ZeroDivisionError):
    pass


class InadmissibleError(PseudoBosonError, ValueError):
    """The vacuum solutions are not square integrable at this parameter point."""


class SingularError(PseudoBosonError, ZeroDivisionError):
    def __init__(self, message, eta=None):
        super().__init__(message)
        self.eta = eta


class ConvergenceError(PseudoBosonError, ArithmeticError):
    pass


class ToleranceError(PseudoBosonError, ArithmeticError):
    pass
