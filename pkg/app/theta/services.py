from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, e, exp, gcd, pi, sqrt
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import eval_legendre
from sympy import mobius, primefactors

from app.archgeom import ArchFrame, ArchGeomService, CuspService
from app.bounds import MalformedDeterminantError, norm_gram, partial_dual_order
from app.core.logging import get_logger
from app.core.rationals import to_fraction
from app.core.settings import settings
from app.enumeration import EnumerationService, QuadForm
from app.enumeration.services import ellipsoid_volume_estimate
from app.lattice import is_squarefree
from .exceptions import (
    InvalidFactorizationError,
    InvalidFamilyError,
    InvalidTransformationError,
    TruncationBudgetExceededError,
)
from .kernels import KernelShape, kernel_shape, lattice_weights, test_function
from .schemas import (
    BernsteinReport,
    ParsevalReport,
    PdeReport,
    PeriodicityReport,
    ThetaSpec,
    TransformReport,
)

# Configure logging
logger = get_logger(__name__)

IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]

DEFAULT_POINTS = (1j, 0.3 + 1.1j, -0.25 + 0.8j)

# det > 0 at every point, so the indef_hol test function is smooth there
PDE_POINTS = ((0.3, 0.2, -0.1, 0.8), (0.5, 0.1, 0.2, 0.4), (-0.2, 0.3, 0.1, 0.7))


def act(g: IntMatrix, s: np.ndarray) -> np.ndarray:
    (a, b), (c, d) = g
    return (a * s + b) / (c * s + d)


def unit_factor(g: IntMatrix, s: np.ndarray, kappa: int) -> np.ndarray:
    """((cs+d)/|cs+d|)^{−κ}, the unitary weight-κ automorphy factor."""
    (_, _), (c, d) = g
    j = c * np.asarray(s) + d
    return (j / np.abs(j)) ** (-kappa)


def sl2_inverse(g: IntMatrix) -> IntMatrix:
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


def sl2_mul(g: IntMatrix, h: IntMatrix) -> IntMatrix:
    (a, b), (c, d) = g
    (p, q), (r, s) = h
    return ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))


def balanced_points(g: IntMatrix) -> np.ndarray:
    """Points with |cs+d| = 1, so s and gs have the same imaginary part."""
    (_, _), (c, d) = g
    if c == 0:
        return np.array(DEFAULT_POINTS)
    angles = np.array([pi / 2, pi / 3, 2 * pi / 3])
    return -d / c + np.exp(1j * angles) / abs(c)


def truncation_radius(shape: KernelShape, y: float, covolume: float, accuracy: float) -> float:
    """
    Radius R with the tail of Σ_{P(γ) > R²} below `accuracy`.

    Gaussian kernels: prefactor·y^p·count·(1+R)^{3+deg}·e^{−2πyR²}, the cubic
    from the number of lattice points in a shell. indef_hol: its terms decay
    like P^{−k/2}, giving a power-law tail ∝ R^{4−k}.
    """
    count = 1 + 2 * pi ** 2 / covolume
    scale = shape.prefactor * y ** shape.power * count
    if shape.family != "indef_hol":
        R = 1.0
        while scale * (1 + R) ** (3 + shape.degree) * exp(-2 * pi * y * R * R) > accuracy:
            R += 0.05
        return R
    k = shape.degree
    peak = ((k - 1) / (2 * pi * e * y)) ** (k - 1)
    tail = scale * peak * 2 ** (k / 2) / (k - 4)
    return max(1.0, (tail / accuracy) ** (1 / (k - 4)))


@dataclass(frozen=True)
class ThetaSeries:
    """
    A truncated theta sum y^p Σ w e(x det) e^{−2πy E}.

    Holomorphic families (E = det) are stored aggregated by determinant, one
    entry per Fourier frequency. `det_keys` are the exact determinants
    times `det_scale`.
    """

    shape: KernelShape
    ell: int
    y_min: float
    radius: float
    points: int
    weights: np.ndarray
    det: np.ndarray
    energy: np.ndarray
    det_keys: np.ndarray
    det_scale: int

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        flat = s.ravel()
        out = np.empty(flat.shape, dtype=complex)
        chunk = max(1, 4_000_000 // max(len(self.weights), 1))
        for start in range(0, len(flat), chunk):
            block = flat[start:start + chunk]
            x, y = block.real[:, None], block.imag[:, None]
            phases = np.exp(2j * pi * x * self.det[None, :] - 2 * pi * y * self.energy[None, :])
            out[start:start + chunk] = block.imag ** self.shape.power * (phases @ self.weights)
        return out.reshape(s.shape)

    def coefficients(self, y: float) -> Tuple[np.ndarray, np.ndarray]:
        """Exact frequencies (as keys) and Fourier coefficients c_n(y) at height y."""
        keys, inverse = np.unique(self.det_keys, return_inverse=True)
        terms = self.weights * np.exp(-2 * pi * y * self.energy)
        values = np.zeros(len(keys), dtype=complex)
        np.add.at(values, inverse, terms)
        return keys, y ** self.shape.power * values


def _frames(spec: ThetaSpec) -> Tuple[ArchFrame, Optional[ArchFrame]]:
    if spec.is_split:
        right = ArchGeomService.sigma_z(spec.w) if spec.w is not None else None
        return ArchGeomService.sigma_z(spec.z), right
    if spec.rotation_seed is None:
        return ArchGeomService.identity_frame("definite"), None
    return ArchGeomService.random_rotation(spec.rotation_seed), None


@lru_cache(maxsize=32)
def _build_series(spec: ThetaSpec, y_min: float) -> ThetaSeries:
    shape = spec.shape
    L = partial_dual_order(spec.d_B, spec.N, spec.ell)
    left, right = _frames(spec)
    C = ArchGeomService.coordinate_matrix(L, left, right)
    gram = C.T @ C
    covolume = float(np.sqrt(np.linalg.det(gram)))
    R = truncation_radius(shape, y_min, covolume, spec.accuracy)
    estimate = ellipsoid_volume_estimate(gram, R * R)
    if estimate > settings.THETA_MAX_POINTS:
        raise TruncationBudgetExceededError(estimate, settings.THETA_MAX_POINTS)

    points = EnumerationService.enumerate_ellipsoid(QuadForm(gram), R * R)
    S, scale = norm_gram(L)
    keys = np.einsum("pi,ij,pj->p", points, S, points)
    det = keys / scale
    P, u, X, _ = ArchGeomService.forms(points @ C.T, shape.kind)
    weights = shape.prefactor * lattice_weights(shape.family, spec.k, spec.m, u, X, det)
    energy = P if shape.energy == "P" else det
    keep = weights != 0
    weights, det, energy, keys = weights[keep], det[keep], energy[keep], keys[keep]

    if shape.energy == "det":
        keys, inverse = np.unique(keys, return_inverse=True)
        aggregated = np.zeros(len(keys), dtype=complex)
        np.add.at(aggregated, inverse, weights)
        weights, det = aggregated, keys / scale
        energy = det
    logger.debug(f"θ {shape.family} ℓ={spec.ell}: R={R:.2f}, {len(points)} points, {len(weights)} terms")
    return ThetaSeries(shape=shape, ell=spec.ell, y_min=y_min, radius=R, points=len(points),
                       weights=weights, det=det, energy=energy, det_keys=keys, det_scale=scale)


class ThetaService:
    """Theta kernels: evaluation, Fourier coefficients and transformation checks."""

    @staticmethod
    def series(spec: ThetaSpec, y_min: float) -> ThetaSeries:
        """The truncated sum, valid at every s with Im s ≥ y_min."""
        if not y_min > 0:
            raise InvalidFamilyError(spec.family, f"evaluation height {y_min} must be positive")
        return _build_series(spec, float(y_min))

    @staticmethod
    def as_function(spec: ThetaSpec, y_min: float) -> Callable[[np.ndarray], np.ndarray]:
        return ThetaService.series(spec, y_min)

    @staticmethod
    def theta_eval(spec: ThetaSpec, s: complex) -> complex:
        """
        θ_{g,ℓ}(s) for the kernel family of `spec`, with tail below its accuracy.

        Args:
            spec: kernel description
            s: point of the upper half plane

        Returns:
            complex: the truncated lattice sum
        """
        s = complex(s)
        return complex(ThetaService.series(spec, s.imag)(np.array([s]))[0])

    @staticmethod
    def values(spec: ThetaSpec, s: Sequence[complex]) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        return ThetaService.series(spec, float(s.imag.min()))(s)

    @staticmethod
    def fourier_coeffs(spec: ThetaSpec, n, y: float) -> complex:
        """
        Coefficient of e(nx) in θ(x + iy), y-weight included.

        Raises:
            MalformedDeterminantError: n ∉ (1/ℓ)Z
        """
        n = to_fraction(n)
        if (n * spec.ell).denominator != 1:
            raise MalformedDeterminantError(n, spec.ell)
        series = ThetaService.series(spec, y)
        key = n * series.det_scale
        if key.denominator != 1:
            return 0j
        mask = series.det_keys == int(key)
        terms = series.weights[mask] * np.exp(-2 * pi * y * series.energy[mask])
        return complex(y ** series.shape.power * terms.sum())

    @staticmethod
    def _tolerance(spec: ThetaSpec, scale: float) -> float:
        return 100 * spec.accuracy * max(1.0, scale)

    @staticmethod
    def al_transform_check(spec: ThetaSpec, ell: int,
                           points: Optional[Sequence[complex]] = None) -> TransformReport:
        """
        (θ_{g,1}|_κ τ_ℓ)(s) against μ(gcd(ℓ, d_B))/ℓ · θ_{g,ℓ}(s).

        Test points default to |cs+d| = 1 for τ_ℓ, keeping both sides at the
        same height.
        """
        if ell < 1 or spec.level % ell:
            raise InvalidFamilyError(spec.family, f"ℓ={ell} must divide {spec.level}")
        base = spec.model_copy(update={"ell": 1})
        target = spec.model_copy(update={"ell": ell})
        tau = CuspService.tau_ell(ell, spec.level)
        s = np.asarray(points if points is not None else balanced_points(tau), dtype=complex)
        images = act(tau, s)
        y_min = float(min(s.imag.min(), images.imag.min()))

        factor = int(mobius(gcd(ell, spec.d_B))) / ell
        lhs = ThetaService.series(base, y_min)(images) * unit_factor(tau, s, spec.kappa)
        rhs = factor * ThetaService.series(target, y_min)(s)
        deviation = float(np.max(np.abs(lhs - rhs)))
        scale = float(np.max(np.abs(rhs)))
        report = TransformReport(check="atkin_lehner", family=spec.family, ell=ell, kappa=spec.kappa,
                                 factor=factor, points=list(s), deviation=deviation, scale=scale,
                                 tolerance=ThetaService._tolerance(spec, scale))
        if report.passed:
            logger.info(f"✓ θ|τ_{ell} = {factor:g}·θ_{ell} ({spec.family}), deviation {deviation:.2e}")
        else:
            logger.error(f"✗ θ|τ_{ell} deviates by {deviation:.2e} ({spec.family})")
        return report

    @staticmethod
    def gamma0_modularity_check(spec: ThetaSpec, gamma: IntMatrix,
                                points: Optional[Sequence[complex]] = None) -> TransformReport:
        """
        Weight-κ invariance of θ_{g,ℓ} under γ ∈ Γ₀(d_B N).

        For ℓ > 1 the kernel is a multiple of θ_{g,1}|τ_ℓ, so the matrix
        checked is τ_ℓ⁻¹ γ τ_ℓ.
        """
        (a, b), (c, d) = gamma
        if a * d - b * c != 1 or c % spec.level:
            raise InvalidTransformationError(gamma, spec.level)
        g = gamma
        if spec.ell > 1:
            tau = CuspService.tau_ell(spec.ell, spec.level)
            g = sl2_mul(sl2_mul(sl2_inverse(tau), gamma), tau)
        s = np.asarray(points if points is not None else balanced_points(g), dtype=complex)
        images = act(g, s)
        series = ThetaService.series(spec, float(min(s.imag.min(), images.imag.min())))
        lhs = series(images) * unit_factor(g, s, spec.kappa)
        rhs = series(s)
        deviation = float(np.max(np.abs(lhs - rhs)))
        scale = float(np.max(np.abs(rhs)))
        report = TransformReport(check="gamma0", family=spec.family, ell=spec.ell, kappa=spec.kappa,
                                 factor=1.0, points=list(s), deviation=deviation, scale=scale,
                                 tolerance=ThetaService._tolerance(spec, scale))
        log = logger.info if report.passed else logger.error
        log(f"{'✓' if report.passed else '✗'} θ|γ = θ for γ={g}: deviation {deviation:.2e}")
        return report

    @staticmethod
    def x_periodicity_check(spec: ThetaSpec, s: complex) -> PeriodicityReport:
        s = complex(s)
        values = ThetaService.series(spec, s.imag)(np.array([s, s + spec.ell]))
        return PeriodicityReport(s=s, period=spec.ell, deviation=float(abs(values[1] - values[0])))

    @staticmethod
    def parseval_check(spec: ThetaSpec, y: float) -> ParsevalReport:
        """Mean of |θ|² over one x-period against the sum of squared coefficients."""
        series = ThetaService.series(spec, y)
        keys, coeffs = series.coefficients(y)
        top = float(np.max(np.abs(series.det))) if len(series.det) else 0.0
        nodes = 2 * ceil(spec.ell * top) + 2
        x = spec.ell * np.arange(nodes) / nodes
        values = series(x + 1j * y)
        return ParsevalReport(y=y, period=spec.ell, nodes=nodes,
                              mean_square=float(np.mean(np.abs(values) ** 2)),
                              coefficient_sum=float(np.sum(np.abs(coeffs) ** 2)))

    @staticmethod
    def pde_check(family: str, k: int = 0, m: int = 0,
                  steps: Sequence[float] = (0.02, 0.01, 0.005),
                  points: Optional[Sequence[Sequence[float]]] = None) -> PdeReport:
        """
        Residual of −ΔΦ + (2π)² det Φ = 2πκΦ with centered differences.

        Δ = ¼(∂²_a ∓ (∂²_b + ∂²_c) + ∂²_d), minus on the split algebra. The
        residual is O(h²), so successive ratios should be near 4.
        """
        shape = kernel_shape(family, k, m)
        x0 = np.asarray(points if points is not None else PDE_POINTS, dtype=float)
        signs = np.array([1.0, -1.0, -1.0, 1.0]) if shape.kind == "split" else np.ones(4)
        _, _, _, det = ArchGeomService.forms(x0, shape.kind)
        phi0 = test_function(family, x0, k, m)

        residuals = []
        for h in steps:
            laplacian = np.zeros(len(x0), dtype=complex)
            for axis in range(4):
                shift = np.zeros(4)
                shift[axis] = h
                second = (test_function(family, x0 + shift, k, m) - 2 * phi0
                          + test_function(family, x0 - shift, k, m)) / (h * h)
                laplacian += signs[axis] * second
            laplacian /= 4
            residual = -laplacian + (2 * pi) ** 2 * det * phi0 - 2 * pi * shape.kappa * phi0
            residuals.append(float(np.max(np.abs(residual))))
        ratios = [residuals[i] / residuals[i + 1] for i in range(len(residuals) - 1)]
        logger.debug(f"PDE {family}: residuals {residuals}")
        return PdeReport(family=family, kappa=shape.kappa, steps=list(steps),
                         residuals=residuals, ratios=ratios)

    @staticmethod
    def bernstein_check(m_max: int = 50, grid_points: int = 2001) -> BernsteinReport:
        """|P_m(t)| ≤ min{1, √(2/(πm))(1−t²)^{−1/4}} on an open grid of (−1, 1)."""
        t = np.linspace(-1.0, 1.0, grid_points + 2)[1:-1]
        worst, violations = 0.0, []
        for m in range(m_max + 1):
            bound = np.ones_like(t)
            if m:
                bound = np.minimum(1.0, np.sqrt(2 / (pi * m)) * (1 - t * t) ** -0.25)
            ratio = float(np.max(np.abs(eval_legendre(m, t)) / bound))
            worst = max(worst, ratio)
            if ratio > 1 + 1e-12:
                violations.append((m, ratio))
        return BernsteinReport(m_max=m_max, grid_points=grid_points, worst_ratio=worst,
                               violations=violations)

    @staticmethod
    def volume_coefficient(d_B: int, N: int) -> Fraction:
        """V_{d_B,N}/π = d_BN/3 · ∏_{p|d_B}(1 − 1/p) · ∏_{p|N}(1 + 1/p)."""
        if d_B < 1 or N < 1 or not is_squarefree(d_B) or not is_squarefree(N) or gcd(d_B, N) != 1:
            raise InvalidFactorizationError(d_B, N)
        value = Fraction(d_B * N, 3)
        for p in primefactors(d_B):
            value *= 1 - Fraction(1, p)
        for p in primefactors(N):
            value *= 1 + Fraction(1, p)
        return value

    @staticmethod
    def volume(d_B: int, N: int) -> float:
        return float(ThetaService.volume_coefficient(d_B, N)) * pi

    @staticmethod
    def coset_representatives(M: int) -> List[IntMatrix]:
        """τ_ℓ n(j) for ℓ | M, 0 ≤ j < ℓ: representatives of Γ₀(M)\\SL₂(Z)."""
        reps = []
        for tile in CuspService.siegel_tiles(M):
            (a, b), (c, d) = tile.tau
            reps.extend(((a, a * j + b), (c, c * j + d)) for j in range(tile.ell))
        return reps


def lift_spec(k: int, z: complex, w: Optional[complex] = None, accuracy: float = 1e-7) -> ThetaSpec:
    """The level-1 holomorphic indefinite kernel at σ_z (and σ_w)."""
    extra = {} if w is None else {"right_x": w.real, "right_y": w.imag}
    return ThetaSpec(family="indef_hol", k=k, x=z.real, y=z.imag, accuracy=accuracy, **extra)
