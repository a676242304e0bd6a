"""
Custom exceptions for the quaternion algebra module.

These exceptions provide specific error types for contract violations
in exact quaternion arithmetic.
"""
from app.core.exceptions import LabException


class QuaternionAlgebraException(LabException):
    """Base exception for all quaternion-algebra errors."""
    pass


class AlgebraMismatchError(QuaternionAlgebraException):
    """Raised when elements of different algebras are combined."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(
            f"Cannot combine elements of {left.label()} and {right.label()}")


class ZeroStructureConstantError(QuaternionAlgebraException):
    """Raised when a structure constant a or b is zero."""

    def __init__(self, a, b):
        self.a = a
        self.b = b
        super().__init__(
            f"Structure constants must be nonzero, got a={a}, b={b}")


class NonInvertibleElementError(QuaternionAlgebraException):
    """Raised when inverting an element of reduced norm zero."""

    def __init__(self, element):
        self.element = element
        super().__init__(f"Element {element} has reduced norm 0")


class InvalidPlaceError(QuaternionAlgebraException):
    """Raised when a Hilbert symbol is requested at a non-prime place."""

    def __init__(self, place):
        self.place = place
        super().__init__(
            f"Invalid place {place!r}: expected a prime or 'inf'")
