"""
Cusp data for Γ₀(M) and the Atkin–Lehner height.

τ_ℓ, Siegel tiles and the maximization of Im over the A₀(N)-orbit of a
point, plus the inequalities satisfied at the maximizing point.
"""
from math import gcd, isqrt, sqrt
from typing import List, Optional, Tuple

import numpy as np
from sympy import divisors
from sympy.ntheory.modular import crt

from app.core.logging import get_logger
from app.core.settings import settings
from app.lattice import is_squarefree
from .exceptions import InvalidCuspDataError, InvalidUpperHalfPlanePointError
from .schemas import Lemma61Report, SiegelTile

# Configure logging
logger = get_logger(__name__)

IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s·a + t·b = g = gcd(a, b) ≥ 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _crt2(r1: int, m1: int, r2: int, m2: int) -> int:
    if m1 == 1:
        return r2 % m2
    if m2 == 1:
        return r1 % m1
    return int(crt([m1, m2], [r1 % m1, r2 % m2])[0])


class CuspService:
    """Cusp widths, τ_ℓ, Siegel tiles and the A₀(N) height."""

    @staticmethod
    def tau_ell(ell: int, M: int) -> IntMatrix:
        """
        An SL₂(Z) matrix ≡ [[0,1],[−1,0]] mod ℓ and ≡ I mod M/ℓ.

        The four entries are fixed modulo M by CRT; the first column is then
        shifted by multiples of M until it is primitive, and the second column
        is the unique lift with determinant 1 in the right residue class.
        """
        if M < 1 or not is_squarefree(M) or ell < 1 or M % ell:
            raise InvalidCuspDataError(ell, M)
        if ell == 1:
            return ((1, 0), (0, 1))
        m = M // ell
        alpha = _crt2(0, ell, 1, m)
        beta = _crt2(1, ell, 0, m)
        gamma = _crt2(-1, ell, 0, m)
        delta = _crt2(0, ell, 1, m)

        t = 0
        while gcd(alpha + t * M, gamma) != 1:
            t += 1
        alpha += t * M
        # α δ₀ − β₀ γ = 1
        _, s, r = _egcd(alpha, gamma)
        delta0, beta0 = s, -r
        for k in range(M):
            b, d = beta0 + k * alpha, delta0 + k * gamma
            if (b - beta) % M == 0 and (d - delta) % M == 0:
                tau = ((alpha, b), (gamma, d))
                logger.debug(f"τ_{ell} for M={M}: {tau}")
                return tau
        raise InvalidCuspDataError(ell, M)

    @staticmethod
    def cusp_width(ell: int) -> int:
        return ell

    @staticmethod
    def siegel_tiles(M: int) -> List[SiegelTile]:
        """One tile per ℓ | M: (τ_ℓ, 0 ≤ x ≤ ℓ, y ≥ √3ℓ²/(2M))."""
        if M < 1 or not is_squarefree(M):
            raise InvalidCuspDataError(1, M)
        return [
            SiegelTile(ell=ell, tau=CuspService.tau_ell(ell, M), x_range=(0.0, float(ell)),
                       y_min=sqrt(3) * ell * ell / (2 * M))
            for ell in divisors(M)
        ]

    @staticmethod
    def _best_al_element(z: complex, N: int):
        """(Im, ℓ, a, b, c, d) for the A₀(N) element [[ℓa, b], [Nc, ℓd]] maximizing Im."""
        z = complex(z)
        if not z.imag > 0:
            raise InvalidUpperHalfPlanePointError(z)
        x, y = z.real, z.imag
        best = (y, 1, 1, 0, 0, 1)
        for ell in divisors(N):
            other = N // ell
            y0 = best[0]
            c_max = int(sqrt(ell / (y * y0)) / N) + 1
            for c in range(-c_max, c_max + 1):
                radius = sqrt(ell * y / y0)
                lo = int(np.floor((-radius - N * c * x) / ell)) - 1
                hi = int(np.ceil((radius - N * c * x) / ell)) + 1
                for d in range(lo, hi + 1):
                    if c == 0 and d == 0:
                        continue
                    if gcd(ell * d, other * c) != 1:
                        continue
                    im = ell * y / abs(N * c * z + ell * d) ** 2
                    if im > best[0] * (1 + 1e-14):
                        g, s, t = _egcd(ell * d, other * c)
                        # a·ℓd − b·(N/ℓ)c = 1
                        best = (im, ell, s, -t, c, d)
        return best

    @staticmethod
    def height_H(z: complex, N: int) -> float:
        """H(z) = max over A₀(N) of Im(γz)."""
        return CuspService._best_al_element(z, N)[0]

    @staticmethod
    def reduce_to_AL_max(z: complex, N: int) -> complex:
        """A point of the A₀(N)-orbit of z with Im equal to H(z), real part in [0, 1)."""
        _, ell, a, b, c, d = CuspService._best_al_element(z, N)
        z = complex(z)
        w = (ell * a * z + b) / (N * c * z + ell * d)
        return complex(w.real - np.floor(w.real), w.imag)

    @staticmethod
    def al_random_point(N: int, seed: int) -> complex:
        """A random point of the upper half plane moved to its A₀(N) maximum."""
        rng = np.random.default_rng(seed)
        z = complex(rng.uniform(0.0, 1.0), float(np.exp(rng.uniform(np.log(0.05), np.log(2.0)))))
        return CuspService.reduce_to_AL_max(z, N)

    @staticmethod
    def lemma61_check(z: complex, N: int, box: int = 20, tolerance: Optional[float] = None) -> Lemma61Report:
        """
        Check Im z* ≥ √3/(2N) and |cz*+d|² ≥ gcd(c,N)/N on |c|, |d| ≤ box at the AL-maximal z*.

        Args:
            z: any point of the upper half plane
            N: squarefree level
            box: half-width of the integer box of (c, d)

        Returns:
            Lemma61Report: violations counted with a relative tolerance
        """
        tolerance = settings.FLOAT_TOLERANCE if tolerance is None else tolerance
        zm = CuspService.reduce_to_AL_max(z, N)
        bound = sqrt(3) / (2 * N)
        c, d = np.meshgrid(np.arange(-box, box + 1), np.arange(-box, box + 1), indexing="ij")
        mask = (c != 0) | (d != 0)
        c, d = c[mask], d[mask]
        lhs = np.abs(c * zm + d) ** 2
        rhs = np.gcd(c, N) / N
        ratio = lhs / rhs
        violations = int(np.count_nonzero(ratio < 1 - tolerance))
        report = Lemma61Report(
            z=complex(z), z_max=zm, height=zm.imag, im_bound=bound,
            im_ok=zm.imag >= bound * (1 - tolerance),
            min_ratio=float(ratio.min()), violations=violations,
        )
        if report.passed:
            logger.debug(f"✓ AL-maximal point inequalities hold at {zm} (N={N})")
        else:
            logger.error(f"✗ AL-maximal point inequalities fail at {zm} (N={N}): {violations} violations")
        return report
