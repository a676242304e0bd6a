from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from .exceptions import NotPositiveDefiniteError, UnboundedBodyError

ExactGram = Tuple[Tuple[Fraction, ...], ...]


def quadratic_values(gram: np.ndarray, points: np.ndarray) -> np.ndarray:
    """c^T G c for every row c of points."""
    points = np.asarray(points, dtype=float)
    return np.einsum("ki,ij,kj->k", points, gram, points)


def exact_quadratic_value(gram: ExactGram, c) -> Fraction:
    n = len(gram)
    return sum((gram[i][j] * int(c[i]) * int(c[j]) for i in range(n) for j in range(n)), Fraction(0))


@dataclass(eq=False)
class QuadForm:
    """A positive-definite quadratic form c ↦ c^T G c on lattice coordinates."""

    gram: np.ndarray
    exact: Optional[ExactGram] = None

    def __post_init__(self):
        self.gram = np.asarray(self.gram, dtype=float)
        self.gram = (self.gram + self.gram.T) / 2
        try:
            np.linalg.cholesky(self.gram)
        except np.linalg.LinAlgError:
            raise NotPositiveDefiniteError(self.gram.shape[0])

    @property
    def dimension(self) -> int:
        return self.gram.shape[0]

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return quadratic_values(self.gram, np.atleast_2d(points))

    @classmethod
    def euclidean(cls, n: int) -> "QuadForm":
        return cls(np.eye(n), tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))


@dataclass(eq=False)
class Gauge:
    """
    f(c) = max_k sqrt(c^T G_k c), the gauge of an intersection of ellipsoids.

    A QuadForm Q is the gauge sqrt(Q); Ω(δ,1) is max(√P, √(u/δ)).
    """

    grams: Tuple[np.ndarray, ...]
    description: str = "quadratic"
    exact: Tuple[Optional[ExactGram], ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.grams = tuple(np.asarray(g, dtype=float) for g in self.grams)
        total = sum(self.grams)
        if np.linalg.eigvalsh((total + total.T) / 2).min() <= 1e-12 * max(1.0, np.abs(total).max()):
            raise UnboundedBodyError(self.description)

    @property
    def dimension(self) -> int:
        return self.grams[0].shape[0]

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        values = np.stack([quadratic_values(g, points) for g in self.grams])
        return np.sqrt(np.maximum(values.max(axis=0), 0.0))

    def surrogate(self) -> Tuple[QuadForm, int]:
        """(Σ G_k, K): f(c) ≤ R implies c^T(ΣG_k)c ≤ K·R²."""
        exact = None
        if self.exact and all(e is not None for e in self.exact):
            n = self.dimension
            exact = tuple(tuple(sum(e[i][j] for e in self.exact) for j in range(n)) for i in range(n))
        return QuadForm(sum(self.grams), exact), len(self.grams)

    @classmethod
    def from_quadform(cls, q: QuadForm) -> "Gauge":
        return cls((q.gram,), "quadratic", (q.exact,))


class MinimaReport(BaseModel):
    """Successive minima λ₁ ≤ … ≤ λ_n with independent witnesses."""

    minima: List[float]
    witnesses: List[List[int]]
    gauges: List[float]


class ReducedBasisReport(BaseModel):
    """A reduced basis, the gauges of its vectors and the constant c_n = max f(vᵢ)/λᵢ."""

    basis: List[List[int]]
    gauges: List[float]
    minima: List[float]
    constant: float


class CountLawReport(BaseModel):
    """|K ∩ Λ| against ∏(1 + T/λᵢ)."""

    count: int
    minima: List[float]
    product: float
    ratio: float
    band: float
    within_band: bool


class BallCountReport(BaseModel):
    """Lattice points in a planar disc and the 1 + R/λ₁ + R²/(λ₁λ₂) bound."""

    count: int
    bound: float
    minima: Tuple[float, float]
