from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from app.core.logging import get_logger
from app.core.rationals import to_fraction
from app.qalg import AlgebraSpec, Quat, QuaternionService
from . import linalg
from .exceptions import (
    DegenerateGramError,
    NotInLatticeError,
    RankMismatchError,
)
from .schemas import GramInvariants, Lattice

# Configure logging
logger = get_logger(__name__)


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Generator of the fractional ideal spanned by the values (0 if all vanish)."""
    values = [to_fraction(v) for v in values]
    d = linalg.common_denominator([values]) if values else 1
    g = reduce(gcd, (int(v * d) for v in values), 0)
    return Fraction(abs(g), d)


def rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if it is not a square."""
    value = to_fraction(value)
    if value < 0:
        return None
    n, d = isqrt(value.numerator), isqrt(value.denominator)
    if n * n != value.numerator or d * d != value.denominator:
        return None
    return Fraction(n, d)


class LatticeService:
    """Exact constructions on lattices in a quaternion algebra."""

    @staticmethod
    def span(algebra: AlgebraSpec, generators: Iterable[Quat]) -> Lattice:
        """
        The lattice generated by the given elements, with canonical basis.

        Args:
            algebra: Algebra the generators live in
            generators: Any finite generating set

        Returns:
            Lattice: canonical column-HNF basis
        """
        rows = [g.coords() for g in generators]
        basis = linalg.hnf_rows(rows)
        return Lattice(algebra=algebra, basis=tuple(algebra.element(*row) for row in basis))

    @staticmethod
    def from_rows(algebra: AlgebraSpec, rows: Sequence[Sequence]) -> Lattice:
        return LatticeService.span(
            algebra, [algebra.element(*[to_fraction(e) for e in row]) for row in rows])

    @staticmethod
    def hnf(L: Lattice) -> Lattice:
        """Re-canonicalize; idempotent on lattices built by this service."""
        return LatticeService.span(L.algebra, L.basis)

    @staticmethod
    def gram(L: Lattice) -> linalg.Rows:
        """Gram matrix of the trace form ⟨x, y⟩ = tr(x ȳ) on the basis."""
        return tuple(
            tuple(QuaternionService.bilinear(p, q) for q in L.basis) for p in L.basis)

    @staticmethod
    def gram_determinant(L: Lattice) -> Fraction:
        return linalg.determinant(LatticeService.gram(L))

    @staticmethod
    def reduced_discriminant(L: Lattice) -> Optional[Fraction]:
        """|det Gram|^{1/2}, or None when that is not rational."""
        return rational_sqrt(abs(LatticeService.gram_determinant(L)))

    @staticmethod
    def contains(L: Lattice, q: Quat) -> bool:
        c = L.solve(q)
        return c is not None and all(e.denominator == 1 for e in c)

    @staticmethod
    def coordinates(L: Lattice, q: Quat) -> Tuple[Fraction, ...]:
        c = L.solve(q)
        if c is None:
            raise NotInLatticeError(q)
        return c

    @staticmethod
    def contains_lattice(big: Lattice, small: Lattice) -> bool:
        return all(LatticeService.contains(big, q) for q in small.basis)

    @staticmethod
    def scale(L: Lattice, m) -> Lattice:
        m = to_fraction(m)
        return LatticeService.span(L.algebra, [q * m for q in L.basis])

    @staticmethod
    def add(L1: Lattice, L2: Lattice) -> Lattice:
        """L1 + L2."""
        return LatticeService.span(L1.algebra, L1.basis + L2.basis)

    @staticmethod
    def dual_lattice(L: Lattice) -> Lattice:
        """
        Dual with respect to the trace form, inside the span of L.

        Dual basis rows are Gram⁻¹ · basis rows.
        """
        gram = LatticeService.gram(L)
        if linalg.determinant(gram) == 0:
            raise DegenerateGramError(L.rank)
        inv = linalg.inverse(gram)
        rows = L.rows
        dual_rows = [
            tuple(sum(inv[i][j] * rows[j][k] for j in range(L.rank)) for k in range(4))
            for i in range(L.rank)
        ]
        return LatticeService.from_rows(L.algebra, dual_rows)

    @staticmethod
    def intersect(L1: Lattice, L2: Lattice) -> Lattice:
        """L1 ∩ L2 for lattices of equal rank spanning the same space: (L1^∨ + L2^∨)^∨."""
        if L1.rank != L2.rank:
            raise RankMismatchError(L1.rank, L2.rank)
        dual_sum = LatticeService.add(
            LatticeService.dual_lattice(L1), LatticeService.dual_lattice(L2))
        return LatticeService.dual_lattice(dual_sum)

    @staticmethod
    def index(sub: Lattice, sup: Lattice) -> Fraction:
        """
        Generalized index [sup : sub] = |det of sub's basis in sup's coordinates|.

        An integer whenever sub ⊆ sup.
        """
        if sub.rank != sup.rank:
            raise RankMismatchError(sup.rank, sub.rank)
        coords = [LatticeService.coordinates(sup, q) for q in sub.basis]
        return abs(linalg.determinant(coords))

    @staticmethod
    def traceless_sublattice(L: Lattice) -> Lattice:
        """L⁰ = {x ∈ L : tr x = 0}, rank 3."""
        if L.rank != 4:
            raise RankMismatchError(4, L.rank)
        traces = [q.trace() for q in L.basis]
        kernel = linalg.integer_kernel(traces)
        gens = [sum((q * c for q, c in zip(L.basis, vec)), L.algebra.element()) for vec in kernel]
        return LatticeService.span(L.algebra, gens)

    @staticmethod
    def conjugate_rational(L: Lattice, g: Quat) -> Lattice:
        """g⁻¹ L g."""
        g_inv = g.inverse()
        return LatticeService.span(L.algebra, [g_inv * q * g for q in L.basis])

    @staticmethod
    def is_order(L: Lattice) -> bool:
        """Rank 4, contains 1 and closed under multiplication."""
        if L.rank != 4 or not LatticeService.contains(L, L.algebra.one()):
            return False
        for p in L.basis:
            for q in L.basis:
                if not LatticeService.contains(L, p * q):
                    return False
        return True

    @staticmethod
    def content(L: Lattice) -> Fraction:
        """gcd of q(L) for q = nr, from q(bᵢ) and ⟨bᵢ, bⱼ⟩ (i < j)."""
        values = [q.norm() for q in L.basis]
        for i, p in enumerate(L.basis):
            for q in L.basis[i + 1:]:
                values.append(QuaternionService.bilinear(p, q))
        return rational_gcd(values)

    @staticmethod
    def gram_invariants(L: Lattice) -> GramInvariants:
        """
        Content C, level N, discriminant Δ and elementary divisors of L.

        Args:
            L: nondegenerate lattice

        Returns:
            GramInvariants: N = 1/C(L^∨) and Δ = |det Gram|
        """
        gram = LatticeService.gram(L)
        det = linalg.determinant(gram)
        if det == 0:
            raise DegenerateGramError(L.rank)
        divisors = linalg.elementary_divisors(gram)
        dual = LatticeService.dual_lattice(L)
        invariants = GramInvariants(
            content=LatticeService.content(L),
            level=1 / LatticeService.content(dual),
            discriminant=abs(det),
            elementary_divisors=divisors,
        )
        logger.debug(f"Gram invariants of rank-{L.rank} lattice: {invariants.model_dump()}")
        return invariants

    @staticmethod
    def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[int, ...]:
        return linalg.smith_normal_form(M)

    @staticmethod
    def to_json(L: Lattice) -> Dict[str, Any]:
        return L.to_json()

    @staticmethod
    def from_json(data: Dict[str, Any]) -> Lattice:
        algebra = AlgebraSpec.model_validate(data["algebra"])
        return LatticeService.from_rows(algebra, data["basis"])
