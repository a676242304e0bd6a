"""
Petersson inner products on Γ₀(M)\\H and the theta-lift identity.

Integrands are weight-κ unitary functions F(s) (y^{κ/2} already applied), so
F·Ḡ is Γ₀(M)-invariant and is integrated against dxdy/y² over the
coset translates τ_ℓ n(j) F of the standard fundamental domain F.
"""
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Callable, Iterable, Literal, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from app.archgeom import CuspService
from app.core.logging import get_logger
from app.core.rationals import format_rational
from app.core.settings import settings
from .exceptions import (
    DegenerateLiftConstantError,
    InvalidFamilyError,
    NonConvergentIntegrandError,
    UnknownSchemeError,
)
from .newforms import NewformService
from .schemas import LiftPoint, LiftReport, NewformData
from .services import ThetaService, act, lift_spec

# Configure logging
logger = get_logger(__name__)

UnitaryForm = Callable[[np.ndarray], np.ndarray]
Scheme = Literal["gauss", "adaptive"]


def _column_rule(x: np.ndarray, wx: np.ndarray, y0: np.ndarray, nodes_y: int,
                 y_cut: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and dxdy/y² weights over {y ≥ y0(x)}.

    Gauss–Legendre on [y0, y_cut]; above y_cut the substitution y = y_cut/t
    turns dy/y² into dt/y_cut on (0, 1].
    """
    g, w = leggauss(nodes_y)
    t = (g + 1) / 2
    y0 = np.minimum(y0, y_cut)
    y_low = y0[:, None] + (y_cut - y0)[:, None] * t[None, :]
    w_low = wx[:, None] * (y_cut - y0)[:, None] * (w[None, :] / 2) / y_low ** 2
    y_high = np.broadcast_to(y_cut / t, y_low.shape)
    w_high = np.broadcast_to(wx[:, None] * (w[None, :] / 2) / y_cut, y_low.shape)
    xs = np.broadcast_to(x[:, None], y_low.shape)
    s = np.concatenate([(xs + 1j * y_low).ravel(), (xs + 1j * y_high).ravel()])
    weights = np.concatenate([w_low.ravel(), w_high.ravel()])
    return s, weights


@lru_cache(maxsize=8)
def fundamental_domain_rule(nodes_x: int, nodes_y: int, y_cut: float) -> Tuple[np.ndarray, np.ndarray]:
    """Product rule on |x| ≤ ½, |s| ≥ 1 for the hyperbolic measure."""
    g, w = leggauss(nodes_x)
    x, wx = g / 2, w / 2
    return _column_rule(x, wx, np.sqrt(1 - x * x), nodes_y, y_cut)


class PeterssonService:
    """Inner products ⟨F, G⟩ = ∫ F Ḡ dμ over Γ₀(M)\\H."""

    @staticmethod
    def _rule() -> Tuple[np.ndarray, np.ndarray]:
        return fundamental_domain_rule(settings.QUADRATURE_NODES_X, settings.QUADRATURE_NODES_Y,
                                       settings.QUADRATURE_Y_MAX)

    @staticmethod
    def lowest_height(M: int = 1) -> float:
        """Smallest Im over the quadrature nodes moved by the coset representatives."""
        s, _ = PeterssonService._rule()
        return float(min(act(g, s).imag.min() for g in ThetaService.coset_representatives(M)))

    @staticmethod
    def petersson_inner(F: UnitaryForm, G: UnitaryForm, M: int = 1, scheme: Scheme = "gauss",
                        normalized: bool = False) -> complex:
        """
        ⟨F, G⟩ over Γ₀(M)\\H.

        Args:
            F, G: vectorized unitary weight-κ functions of s
            M: level
            scheme: "gauss" (product Gauss–Legendre) or "adaptive" (scipy dblquad)
            normalized: divide by the volume (probability measure)

        Returns:
            complex: the inner product, hyperbolic measure unless normalized
        """
        cosets = ThetaService.coset_representatives(M)
        if scheme == "gauss":
            s, weights = PeterssonService._rule()
            total = 0j
            for g in cosets:
                image = act(g, s)
                total += complex(np.sum(weights * F(image) * np.conj(G(image))))
        elif scheme == "adaptive":
            total = sum((PeterssonService._adaptive(F, G, g) for g in cosets), 0j)
        else:
            raise UnknownSchemeError(scheme)
        if normalized:
            total /= ThetaService.volume(1, M)
        return total

    @staticmethod
    def _adaptive(F: UnitaryForm, G: UnitaryForm, g) -> complex:
        def integrand(y: float, x: float) -> complex:
            image = act(g, np.array([complex(x, y)]))
            return complex(F(image)[0] * np.conj(G(image)[0])) / (y * y)

        parts, errors = [], []
        for take in (lambda v: v.real, lambda v: v.imag):
            value, error = integrate.dblquad(lambda y, x: take(integrand(y, x)), -0.5, 0.5,
                                             lambda x: sqrt(1 - x * x), lambda x: np.inf,
                                             epsabs=1e-16, epsrel=1e-10)
            parts.append(value)
            errors.append(error)
        estimate = complex(parts[0], parts[1])
        error = sum(errors)
        if not np.isfinite(error) or error > 1e-6 * max(abs(estimate), 1e-300):
            raise NonConvergentIntegrandError(estimate, error)
        return estimate

    @staticmethod
    def tile_cover_integral(F: UnitaryForm, M: int) -> float:
        """
        Σ over Siegel tiles of ∫_0^ℓ ∫_{y_min}^∞ |F(τ_ℓ s)|² dμ.

        The tiles overlap, so this bounds ‖F‖² from above rather than
        computing it.
        """
        total = 0.0
        g, w = leggauss(settings.QUADRATURE_NODES_X)
        for tile in CuspService.siegel_tiles(M):
            lo, hi = tile.x_range
            x = lo + (hi - lo) * (g + 1) / 2
            wx = (hi - lo) * w / 2
            s, weights = _column_rule(x, wx, np.full_like(x, tile.y_min), settings.QUADRATURE_NODES_Y,
                                      max(settings.QUADRATURE_Y_MAX, 2 * tile.y_min))
            total += float(np.sum(weights * np.abs(F(act(tile.tau, s))) ** 2))
        return total

    @staticmethod
    def theta_lift_identity_check(f: NewformData, points: Iterable[complex] = (1j, 2j),
                                  w: Optional[complex] = None, accuracy: float = 1e-7,
                                  scheme: Scheme = "gauss", tolerance: float = 1e-3) -> LiftReport:
        """
        ⟨θ_z, f̃⟩/⟨f̃, f̃⟩ against |φ(z)|²/V, φ the L²-normalized f̃.

        θ_z is the holomorphic indefinite kernel at σ_z. The ratio at the
        first point is snapped to a rational with denominator ≤ 4 and the
        remaining points are measured against that constant. With `w`, the
        two-frame kernels θ(z, w; ·) and θ(w, z; ·) check the phase
        conj(f̃(z))f̃(w) / (conj(f̃(w))f̃(z)) at the first point.
        """
        if f.N != 1:
            raise InvalidFamilyError("indef_hol", f"the lift check needs a level 1 form, got N={f.N}")
        if f.k < 6:
            raise InvalidFamilyError("indef_hol", f"needs k ≥ 6, got k={f.k}")
        points = [complex(z) for z in points]
        y_min = PeterssonService.lowest_height(1)
        heights = [y_min] + [z.imag for z in points] + ([w.imag] if w is not None else [])
        f_tilde = NewformService.as_function(f, min(heights))
        norm = PeterssonService.petersson_inner(f_tilde, f_tilde, 1, scheme).real
        volume = ThetaService.volume(1, 1)

        def lhs(z: complex, right: Optional[complex] = None) -> complex:
            theta = ThetaService.as_function(lift_spec(f.k, z, right, accuracy), y_min)
            return PeterssonService.petersson_inner(theta, f_tilde, 1, scheme) / norm

        raw = []
        for z in points:
            value = lhs(z)
            # |φ(z)|²/V with φ = f̃/‖f̃‖ in the probability measure
            rhs = float(abs(f_tilde(np.array([z]))[0]) ** 2 / (norm / volume) / volume)
            raw.append((z, value, rhs))
            logger.debug(f"lift at z={z}: ⟨θ, f̃⟩/‖f̃‖² = {value}, |φ(z)|²/V = {rhs}")

        first_ratio = raw[0][1].real / raw[0][2]
        constant = Fraction(first_ratio).limit_denominator(4)
        if constant == 0:
            raise DegenerateLiftConstantError(first_ratio, raw[0][0])
        if constant != 1:
            logger.warning(f"Theta-lift constant is {constant} (raw ratio {first_ratio:.8f})")
        results = [
            LiftPoint(z=z, lhs=value, rhs=rhs, ratio=value.real / rhs,
                      relative_error=abs(value - float(constant) * rhs) / (float(constant) * rhs))
            for z, value, rhs in raw
        ]

        phase_deviation = None
        if w is not None:
            z = points[0]
            ratio = lhs(z, w) / lhs(w, z)
            fz, fw = f_tilde(np.array([z, w]))
            expected = np.conj(fz) * fw / (np.conj(fw) * fz)
            phase_deviation = float(abs(ratio - expected))

        report = LiftReport(k=f.k, N=f.N, norm_hyperbolic=norm, volume=volume,
                            constant=format_rational(constant),
                            points=results, phase_deviation=phase_deviation, tolerance=tolerance)
        if report.passed:
            logger.info(f"✓ Theta lift identity holds to {report.max_relative_error:.2e} (constant {constant})")
        else:
            logger.error(f"✗ Theta lift identity off by {report.max_relative_error:.2e}")
        return report
