from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from app.core.rationals import format_rational, to_fraction
from .exceptions import AlgebraMismatchError, NonInvertibleElementError, ZeroStructureConstantError

Scalar = Union[int, Fraction]


class AlgebraSpec(BaseModel):
    """The rational quaternion algebra (a, b | Q): i² = a, j² = b, k = ij = −ji."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction
    b: Fraction

    @field_validator("a", "b", mode="before")
    @classmethod
    def parse_rational(cls, v):
        value = to_fraction(v)
        if value == 0:
            raise ZeroStructureConstantError(v, v)
        return value

    @field_serializer("a", "b")
    def serialize_rational(self, v: Fraction) -> str:
        return format_rational(v)

    @property
    def d_B(self) -> int:
        """Reduced discriminant: product of the finite ramified primes."""
        return _discriminant(self.a, self.b)

    @property
    def is_definite(self) -> bool:
        return self.a < 0 and self.b < 0

    @property
    def is_split(self) -> bool:
        return self.d_B == 1 and not self.is_definite

    def label(self) -> str:
        return f"({format_rational(self.a)},{format_rational(self.b)}|Q)"

    def element(self, w: Scalar = 0, x: Scalar = 0, y: Scalar = 0, z: Scalar = 0) -> "Quat":
        return Quat(self, Fraction(w), Fraction(x), Fraction(y), Fraction(z))

    def one(self) -> "Quat":
        return self.element(1)

    def basis(self) -> Tuple["Quat", "Quat", "Quat", "Quat"]:
        return (self.element(1), self.element(0, 1), self.element(0, 0, 1), self.element(0, 0, 0, 1))


@lru_cache(maxsize=256)
def _discriminant(a: Fraction, b: Fraction) -> int:
    # local import: services depends on schemas
    from .services import QuaternionService
    return QuaternionService.discriminant_of(a, b)


@dataclass(frozen=True, slots=True)
class Quat:
    """
    An element w + x i + y j + z k of an AlgebraSpec, exact rational coordinates.

    Arithmetic never leaves the algebra: mixing algebras raises
    AlgebraMismatchError.
    """

    algebra: AlgebraSpec
    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    def coords(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w, self.x, self.y, self.z)

    def _check(self, other: "Quat") -> None:
        if other.algebra != self.algebra:
            raise AlgebraMismatchError(self.algebra, other.algebra)

    def __add__(self, other: "Quat") -> "Quat":
        if not isinstance(other, Quat):
            other = self.algebra.element(other)
        self._check(other)
        return Quat(self.algebra, self.w + other.w, self.x + other.x,
                    self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self) -> "Quat":
        return Quat(self.algebra, -self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other: "Quat") -> "Quat":
        return self + (-other)

    def __rsub__(self, other) -> "Quat":
        return (-self) + other

    def __mul__(self, other) -> "Quat":
        if not isinstance(other, Quat):
            s = Fraction(other)
            return Quat(self.algebra, s * self.w, s * self.x, s * self.y, s * self.z)
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return Quat(
            self.algebra,
            w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
            w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
            w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )

    def __rmul__(self, other) -> "Quat":
        s = Fraction(other)
        return Quat(self.algebra, s * self.w, s * self.x, s * self.y, s * self.z)

    def __truediv__(self, other) -> "Quat":
        return self * (Fraction(1) / Fraction(other))

    def conj(self) -> "Quat":
        return Quat(self.algebra, self.w, -self.x, -self.y, -self.z)

    def trace(self) -> Fraction:
        return 2 * self.w

    def norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        return self.w * self.w - a * self.x * self.x - b * self.y * self.y + a * b * self.z * self.z

    def inverse(self) -> "Quat":
        n = self.norm()
        if n == 0:
            raise NonInvertibleElementError(self)
        return self.conj() * (Fraction(1) / n)

    def is_zero(self) -> bool:
        return not (self.w or self.x or self.y or self.z)

    def __str__(self) -> str:
        parts = [format_rational(c) for c in self.coords()]
        return f"[{', '.join(parts)}]"
