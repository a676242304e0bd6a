from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from app.core.rationals import format_rational, to_fraction
from app.qalg import AlgebraSpec, Quat
from . import linalg


@dataclass(frozen=True)
class Lattice:
    """
    A Z-lattice of rank 3 or 4 inside a quaternion algebra.

    Instances built through LatticeService always carry the canonical
    (column HNF) basis, so equality of lattices is equality of instances.
    """

    algebra: AlgebraSpec
    basis: Tuple[Quat, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def rows(self) -> linalg.Rows:
        """Basis vectors as coordinate rows (w, x, y, z)."""
        return tuple(q.coords() for q in self.basis)

    @cached_property
    def pivots(self) -> Tuple[Tuple[int, ...], linalg.Rows]:
        return linalg.pivot_inverse(self.rows)

    def solve(self, q: Quat) -> Tuple[Fraction, ...] | None:
        """Rational coordinates of q in this basis, or None if q is outside the span."""
        cols, inv = self.pivots
        v = q.coords()
        c = tuple(sum(v[cols[i]] * inv[i][j] for i in range(self.rank)) for j in range(self.rank))
        for k in range(4):
            if sum(c[j] * self.rows[j][k] for j in range(self.rank)) != v[k]:
                return None
        return c

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.model_dump(),
            "basis": [[format_rational(e) for e in row] for row in self.rows],
        }

    def __str__(self) -> str:
        return f"Lattice[{self.algebra.label()}; " + ", ".join(str(q) for q in self.basis) + "]"


class GramInvariants(BaseModel):
    """Content, level, discriminant and elementary divisors of a lattice's trace form."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    content: Fraction
    level: Fraction
    discriminant: Fraction
    elementary_divisors: Tuple[Fraction, ...]

    @field_validator("content", "level", "discriminant", mode="before")
    @classmethod
    def parse_rational(cls, v):
        return to_fraction(v)

    @field_validator("elementary_divisors", mode="before")
    @classmethod
    def parse_divisors(cls, v):
        return tuple(to_fraction(e) for e in v)

    @field_serializer("content", "level", "discriminant")
    def serialize_rational(self, v: Fraction) -> str:
        return format_rational(v)

    @field_serializer("elementary_divisors")
    def serialize_divisors(self, v: Tuple[Fraction, ...]) -> List[str]:
        return [format_rational(e) for e in v]

    def dual(self) -> "GramInvariants":
        """The invariants the dual lattice must have: (C, N, Δ) ↦ (1/N, 1/C, 1/Δ)."""
        return GramInvariants(
            content=1 / self.level,
            level=1 / self.content,
            discriminant=1 / self.discriminant,
            elementary_divisors=tuple(sorted(1 / e for e in self.elementary_divisors)),
        )
