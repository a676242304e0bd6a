"""Helpers for exact rationals and report formatting."""

from fractions import Fraction
from numbers import Rational
from typing import Union

from app.core.settings import settings

RationalLike = Union[int, Fraction, str, float]


def to_fraction(value: RationalLike) -> Fraction:
    """
    Convert to an exact Fraction.

    Floats go through their shortest decimal repr, so 0.1 becomes 1/10
    rather than the binary expansion.

    Examples:
        "3/4" -> Fraction(3, 4)
        0.01 -> Fraction(1, 100)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # sympy Rational and friends expose p, q
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot convert {value!r} to a rational")


def format_rational(value: Fraction) -> str:
    """
    Render a rational as "p/q" (or "p" when integral).

    Examples:
        Fraction(3, 4) -> "3/4"
        Fraction(6, 3) -> "2"
    """
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float, digits: int | None = None) -> str:
    """
    Render a float with a fixed number of significant digits.

    Examples:
        3.14159265358979 -> "3.14159265359"
    """
    if value is None:
        return ""
    digits = digits or settings.FLOAT_SIGNIFICANT_DIGITS
    return format(float(value), f".{digits}g")


def is_rational_square(value: Fraction) -> bool:
    """
    Check whether a rational is the square of a rational.

    Examples:
        Fraction(9, 4) -> True
        Fraction(-1) -> False
    """
    value = to_fraction(value)
    if value < 0:
        return False
    num, den = value.numerator, value.denominator
    return _is_square(num) and _is_square(den)


def _is_square(n: int) -> bool:
    from math import isqrt
    root = isqrt(n)
    return root * root == n
