"""
Eichler orders of squarefree level and their partial duals.

Maximal orders of the definite algebras come from a fixed table; Eichler
suborders are found by searching index-p sublattices containing 1 and
intersecting the hits over p | N.
"""
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from sympy import factorint

from app.core.logging import get_logger
from app.qalg import AlgebraSpec, QuaternionService
from .exceptions import (
    EichlerSearchExhaustedError,
    InvalidDivisorError,
    LevelNotCoprimeError,
    NotSquarefreeError,
    UnsupportedDiscriminantError,
)
from .schemas import Lattice
from .services import LatticeService

# Configure logging
logger = get_logger(__name__)

_F = Fraction

# Coordinates (w, x, y, z) of a Z-basis of the builtin maximal orders
MAXIMAL_ORDER_BASES: Dict[int, Tuple[Tuple[Fraction, ...], ...]] = {
    2: ((_F(1), _F(0), _F(0), _F(0)), (_F(0), _F(1), _F(0), _F(0)),
        (_F(0), _F(0), _F(1), _F(0)), (_F(1, 2), _F(1, 2), _F(1, 2), _F(1, 2))),
}
for _p in (3, 7, 11):
    MAXIMAL_ORDER_BASES[_p] = (
        (_F(1, 2), _F(0), _F(1, 2), _F(0)), (_F(0), _F(1, 2), _F(0), _F(1, 2)),
        (_F(0), _F(0), _F(1), _F(0)), (_F(0), _F(0), _F(0), _F(1)))
for _p in (5, 13):
    MAXIMAL_ORDER_BASES[_p] = (
        (_F(1, 2), _F(0), _F(1, 2), _F(1, 2)), (_F(0), _F(1, 4), _F(1, 2), _F(1, 4)),
        (_F(0), _F(0), _F(1), _F(0)), (_F(0), _F(0), _F(0), _F(1)))

SUPPORTED_DISCRIMINANTS = (1,) + tuple(sorted(MAXIMAL_ORDER_BASES))


def is_squarefree(n: int) -> bool:
    return isinstance(n, int) and n >= 1 and all(e == 1 for e in factorint(n).values())


def prime_divisors(n: int) -> List[int]:
    return sorted(factorint(n))


class OrderService:
    """Construction and verification of Eichler orders."""

    @staticmethod
    def eichler_order_split(N: int) -> Lattice:
        """
        The standard level-N order [[Z, Z], [NZ, Z]] in (1,1|Q).

        Args:
            N: positive squarefree level

        Returns:
            Lattice: order of reduced discriminant N
        """
        if not is_squarefree(N):
            raise NotSquarefreeError(N)
        gens = [
            QuaternionService.from_matrix(m)
            for m in (((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (N, 0)), ((0, 0), (0, 1)))
        ]
        order = LatticeService.span(QuaternionService.split_algebra(), gens)
        logger.debug(f"✓ Split Eichler order of level {N}")
        return order

    @staticmethod
    def builtin_maximal_order(d_B: int) -> Lattice:
        """The tabulated maximal order of the definite algebra of discriminant d_B."""
        if d_B not in MAXIMAL_ORDER_BASES:
            raise UnsupportedDiscriminantError(d_B, MAXIMAL_ORDER_BASES)
        algebra = QuaternionService.algebra_from_discriminant(d_B)
        return LatticeService.from_rows(algebra, MAXIMAL_ORDER_BASES[d_B])

    @staticmethod
    def index_p_suborders(order: Lattice, p: int):
        """
        Yield the index-p sublattices of an order that contain 1 and are orders.

        Sublattices of index p are kernels of nonzero functionals f mod p;
        f is normalized to have first nonzero entry 1 and must kill 1.
        """
        one = [int(c) for c in LatticeService.coordinates(order, order.algebra.one())]
        for f in product(range(p), repeat=4):
            nonzero = [i for i, v in enumerate(f) if v]
            if not nonzero or f[nonzero[0]] != 1:
                continue
            if sum(a * b for a, b in zip(f, one)) % p:
                continue
            k = nonzero[0]
            gens = [order.basis[i] - order.basis[k] * f[i] for i in range(4) if i != k]
            gens.append(order.basis[k] * p)
            candidate = LatticeService.span(order.algebra, gens)
            if LatticeService.is_order(candidate):
                yield candidate

    @staticmethod
    def eichler_order(maximal: Lattice, N: int) -> Lattice:
        """
        An Eichler order of level N inside a maximal order.

        Args:
            maximal: maximal order of discriminant d_B
            N: squarefree level coprime to d_B

        Returns:
            Lattice: suborder of reduced discriminant d_B·N
        """
        if not is_squarefree(N):
            raise NotSquarefreeError(N)
        d_B = maximal.algebra.d_B
        if N == 1:
            return maximal
        if any(d_B % p == 0 for p in prime_divisors(N)):
            raise LevelNotCoprimeError(N, d_B)

        result = maximal
        for p in prime_divisors(N):
            local = next(OrderService.index_p_suborders(maximal, p), None)
            if local is None:
                raise EichlerSearchExhaustedError(p, N)
            logger.debug(f"Found an index-{p} suborder")
            result = LatticeService.intersect(result, local)

        if LatticeService.reduced_discriminant(result) != d_B * N:
            raise EichlerSearchExhaustedError(N, N)
        logger.info(f"✓ Eichler order of level {N} in {maximal.algebra.label()}")
        return result

    @staticmethod
    def verify_eichler(L: Lattice) -> bool:
        """True iff L is an order whose reduced discriminant is squarefree and divisible by d_B."""
        if L.rank != 4 or not LatticeService.is_order(L):
            return False
        disc = LatticeService.reduced_discriminant(L)
        if disc is None or disc.denominator != 1:
            return False
        disc = int(disc)
        return is_squarefree(disc) and disc % L.algebra.d_B == 0

    @staticmethod
    def build_order(d_B: int, N: int) -> Lattice:
        """The level-N Eichler order used for a builtin discriminant (1 = split)."""
        if d_B == 1:
            return OrderService.eichler_order_split(N)
        return OrderService.eichler_order(OrderService.builtin_maximal_order(d_B), N)

    @staticmethod
    def partial_dual(R: Lattice, ell: int) -> Lattice:
        """
        R(ℓ) = R + (d_B N/ℓ)·R^∨: dual at the primes of ℓ, R elsewhere.

        Args:
            R: Eichler order
            ell: positive divisor of d_B·N

        Returns:
            Lattice: the partial dual
        """
        disc = LatticeService.reduced_discriminant(R)
        modulus = int(disc) if disc is not None and disc.denominator == 1 else None
        if modulus is None or ell < 1 or modulus % ell:
            raise InvalidDivisorError(ell, modulus)
        if ell == 1:
            return R
        dual = LatticeService.dual_lattice(R)
        return LatticeService.add(R, LatticeService.scale(dual, Fraction(modulus, ell)))

    @staticmethod
    def expected_elementary_divisors(d_B: int, N: int, ell: int) -> Tuple[Fraction, Fraction, Fraction]:
        """
        Elementary divisors of the trace-form Gram of R(ℓ)⁰.

        Examples:
            (1, 1, 1) -> (1, 1, 2)
            (1, 6, 2) -> (1/2, 3/2, 6)
        """
        dn = d_B * N
        if dn % ell:
            raise InvalidDivisorError(ell, dn)
        if dn % 2 == 0 and ell % 2:
            values = (Fraction(2, ell), Fraction(dn, ell * ell), Fraction(dn, ell))
        else:
            values = (Fraction(1, ell), Fraction(dn, ell * ell), Fraction(2 * dn, ell))
        return tuple(sorted(values))
