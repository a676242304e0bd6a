from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Sequence, Tuple, Union

from sympy import factorint, isprime
from sympy.ntheory import legendre_symbol

from app.core.logging import get_logger
from app.core.rationals import to_fraction
from .exceptions import InvalidPlaceError, ZeroStructureConstantError
from .schemas import AlgebraSpec, Quat

# Configure logging
logger = get_logger(__name__)

Place = Union[int, str]
Matrix2 = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]

# Builtin definite algebras, one per supported discriminant
DEFINITE_ALGEBRAS: Dict[int, Tuple[int, int]] = {
    2: (-1, -1),
    3: (-1, -3),
    5: (-2, -5),
    7: (-1, -7),
    11: (-1, -11),
    13: (-2, -13),
}


def _square_class(value: Fraction) -> int:
    """Integer in the same square class as a nonzero rational (n/d ~ n·d)."""
    return value.numerator * value.denominator


def _valuation(n: int, p: int) -> Tuple[int, int]:
    """Return (v, u) with n = p^v · u and p ∤ u."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class QuaternionService:
    """Exact operations in rational quaternion algebras."""

    @staticmethod
    def split_algebra() -> AlgebraSpec:
        """The canonical split algebra (1,1|Q) ≅ M₂(Q)."""
        return AlgebraSpec(a=1, b=1)

    @staticmethod
    def algebra_from_discriminant(d_B: int) -> AlgebraSpec:
        """The algebra used for a builtin discriminant (1 means split)."""
        if d_B == 1:
            return QuaternionService.split_algebra()
        a, b = DEFINITE_ALGEBRAS[d_B]
        return AlgebraSpec(a=a, b=b)

    @staticmethod
    def mul(p: Quat, q: Quat) -> Quat:
        return p * q

    @staticmethod
    def reduced_trace(q: Quat) -> Fraction:
        return q.trace()

    @staticmethod
    def reduced_norm(q: Quat) -> Fraction:
        return q.norm()

    @staticmethod
    def bilinear(p: Quat, q: Quat) -> Fraction:
        """The trace form ⟨p, q⟩ = tr(p · conj(q)); ⟨q, q⟩ = 2 nr(q)."""
        return (p * q.conj()).trace()

    @staticmethod
    def commutator(p: Quat, q: Quat) -> Quat:
        return p * q - q * p

    @staticmethod
    def to_matrix(q: Quat) -> Matrix2:
        """
        Image under the fixed isomorphism (1,1|Q) ≅ M₂(Q).

        i ↦ [[1,0],[0,−1]], j ↦ [[0,1],[1,0]], so
        w + x i + y j + z k ↦ [[w+x, y+z], [y−z, w−x]].
        """
        return ((q.w + q.x, q.y + q.z), (q.y - q.z, q.w - q.x))

    @staticmethod
    def from_matrix(m: Sequence[Sequence], algebra: AlgebraSpec | None = None) -> Quat:
        """Inverse of to_matrix; entries may be ints, Fractions or "p/q" strings."""
        algebra = algebra or QuaternionService.split_algebra()
        (m11, m12), (m21, m22) = [[to_fraction(e) for e in row] for row in m]
        return algebra.element(
            (m11 + m22) / 2, (m11 - m22) / 2, (m12 + m21) / 2, (m12 - m21) / 2)

    @staticmethod
    def hilbert_symbol(a, b, p: Place) -> int:
        """
        The local Hilbert symbol (a, b)_p for nonzero rationals.

        Args:
            a: nonzero rational
            b: nonzero rational
            p: a prime or "inf"

        Returns:
            int: +1 or -1
        """
        a, b = to_fraction(a), to_fraction(b)
        if a == 0 or b == 0:
            raise ZeroStructureConstantError(a, b)
        if p in ("inf", "infinity", float("inf")):
            return -1 if (a < 0 and b < 0) else 1
        if not isinstance(p, int) or not isprime(p):
            raise InvalidPlaceError(p)

        alpha, u = _valuation(_square_class(a), p)
        beta, v = _valuation(_square_class(b), p)
        if p == 2:
            def eps(t: int) -> int:
                return ((t - 1) // 2) % 2

            def omega(t: int) -> int:
                return ((t * t - 1) // 8) % 2

            exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
            return -1 if exponent % 2 else 1

        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        if beta % 2:
            sign *= legendre_symbol(u % p, p)
        if alpha % 2:
            sign *= legendre_symbol(v % p, p)
        return sign

    @staticmethod
    def ramified_primes(a, b) -> List[int]:
        """Finite primes where (a, b)_p = −1, ascending."""
        a, b = to_fraction(a), to_fraction(b)
        candidates = {2}
        for value in (_square_class(a), _square_class(b)):
            candidates.update(factorint(abs(value)).keys())
        return sorted(p for p in candidates if QuaternionService.hilbert_symbol(a, b, p) == -1)

    @staticmethod
    def discriminant_of(a, b) -> int:
        result = 1
        for p in QuaternionService.ramified_primes(a, b):
            result *= p
        return result

    @staticmethod
    def discriminant(spec: AlgebraSpec) -> int:
        return spec.d_B

    @staticmethod
    def local_solvability(a: int, b: int, p: int, k: int | None = None) -> int:
        """
        Brute-force oracle for the Hilbert symbol of squarefree integers.

        Looks for a primitive solution of a x² + b y² ≡ z² mod p^k. Intended
        for small p only (the search is over (p^k)³ triples).

        Returns:
            int: +1 if a primitive solution exists, else -1
        """
        if k is None:
            k = 3 if p == 2 else 2
        modulus = p ** k
        squares = [(t * t) % modulus for t in range(modulus)]
        for x, y in product(range(modulus), repeat=2):
            lhs = (a * squares[x] + b * squares[y]) % modulus
            for z in range(modulus):
                if squares[z] == lhs and gcd(gcd(x, y), gcd(z, p)) % p:
                    return 1
        return -1
