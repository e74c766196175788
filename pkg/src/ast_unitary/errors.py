"""Exception types raised across the package."""


class ASTError(Exception):
    """Base class for all package errors."""


class NotPrime(ASTError, ValueError):
    pass


class FieldTooLarge(ASTError, ValueError):
    pass


class NoPrimitivePolynomial(ASTError, RuntimeError):
    pass


class DivisionByZero(ASTError, ZeroDivisionError):
    pass


class ContextMismatch(ASTError, ValueError):
    pass


class ZeroHasNoCoset(ASTError, ValueError):
    pass


class NotInF0Star(ASTError, ValueError):
    pass


class ZeroVector(ASTError, ValueError):
    pass


class NotIsotropic(ASTError, ValueError):
    pass


class InternalInvariantViolation(ASTError, AssertionError):
    pass


class LinesEqual(ASTError, ValueError):
    pass


class DegenerateComplement(ASTError, ArithmeticError):
    pass


class FieldTooLargeForEnumeration(ASTError, ValueError):
    pass


class IsUorV(ASTError, ValueError):
    pass


class ExhaustiveTooLarge(ASTError, ValueError):
    pass


class IndexOutOfRange(ASTError, IndexError):
    pass


class NotCharTwo(ASTError, ValueError):
    pass


class DimMismatch(ASTError, ValueError):
    pass


class TooLargeForDense(ASTError, ValueError):
    pass
