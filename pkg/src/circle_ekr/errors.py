"""Exception types raised across the package."""


class CircleEKRError(Exception):
    """Base class for all package errors."""


class NotAPrimePower(CircleEKRError, ValueError):
    pass


class FieldMismatch(CircleEKRError, ValueError):
    pass


class DivisionByZero(CircleEKRError, ZeroDivisionError):
    pass


class IdenticalPoints(CircleEKRError, ValueError):
    pass


class NotAnOval(CircleEKRError, ValueError):
    pass


class UnsupportedOrder(CircleEKRError, ValueError):
    pass


class ConstructionInvalid(CircleEKRError, RuntimeError):
    pass


class WrongParity(CircleEKRError, ValueError):
    pass


class NotIsomorphicUnderCanonicalMap(CircleEKRError):
    pass


class UnexpectedIntersectionSize(CircleEKRError):
    pass


class NonIntegerEigenvalue(CircleEKRError, ArithmeticError):
    pass


class NotAScheme(CircleEKRError):
    pass


class BudgetExceeded(CircleEKRError):
    """Search stopped on a node or time limit; ``result`` holds the best found."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BadArguments(CircleEKRError, ValueError):
    pass
