from fractions import Fraction
from itertools import product
from math import gamma as gamma_function, pi
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.archgeom import ArchFrame, ArchGeomService, Region
from app.core.exceptions import BudgetExceededError
from app.core.logging import get_logger
from app.core.rationals import to_fraction
from app.core.settings import settings
from app.lattice import Lattice
from .exceptions import RankTwoRequiredError
from .reduction import greedy_improve, lll_reduce
from .schemas import (
    BallCountReport,
    CountLawReport,
    ExactGram,
    Gauge,
    MinimaReport,
    QuadForm,
    ReducedBasisReport,
    exact_quadratic_value,
    quadratic_values,
)

# Configure logging
logger = get_logger(__name__)


def _sorted_points(points: np.ndarray, n: int) -> np.ndarray:
    if not len(points):
        return np.zeros((0, n), dtype=np.int64)
    points = np.asarray(points, dtype=np.int64)
    return points[np.lexsort(points.T[::-1])]


def ellipsoid_volume_estimate(gram: np.ndarray, bound: float) -> float:
    """Volume of {c : c^T G c ≤ bound}, the expected number of lattice points."""
    n = gram.shape[0]
    unit_ball = pi ** (n / 2) / gamma_function(n / 2 + 1)
    return unit_ball * max(bound, 0.0) ** (n / 2) / np.sqrt(np.linalg.det(gram))


def exact_form_grams(L: Lattice, frame: ArchFrame) -> Optional[Tuple[ExactGram, ExactGram, ExactGram]]:
    """Exact Gram matrices of P, u and |X|² in the basis of L, when the frame is rational."""
    if not frame.is_exact:
        return None
    n = L.rank
    single = [ArchGeomService.exact_forms(q, frame) for q in L.basis]
    grams = [[[Fraction(0)] * n for _ in range(n)] for _ in range(3)]
    for i in range(n):
        for j in range(n):
            if i == j:
                values = (single[i].P, single[i].u, single[i].abs_X2)
            else:
                f = ArchGeomService.exact_forms(L.basis[i] + L.basis[j], frame)
                values = (
                    (f.P - single[i].P - single[j].P) / 2,
                    (f.u - single[i].u - single[j].u) / 2,
                    (f.abs_X2 - single[i].abs_X2 - single[j].abs_X2) / 2,
                )
            for k in range(3):
                grams[k][i][j] = values[k]
    return tuple(tuple(tuple(row) for row in g) for g in grams)


class EnumerationService:
    """Lattice point enumeration, successive minima and counting laws."""

    @staticmethod
    def enumerate_ellipsoid(form: Union[QuadForm, np.ndarray], bound: float,
                            center: Optional[Sequence[float]] = None) -> np.ndarray:
        """
        All integer vectors c with Q(c − center) ≤ bound (Fincke–Pohst).

        Box bounds come from a float Cholesky factor with a small slack; the
        final test is exact when the form carries an exact Gram and there is
        no center.

        Args:
            form: positive-definite QuadForm (or Gram matrix)
            bound: upper bound on Q; negative gives no points
            center: optional real center in lattice coordinates

        Returns:
            np.ndarray: k×n int64 array, lexicographically sorted
        """
        if not isinstance(form, QuadForm):
            form = QuadForm(form)
        n = form.dimension
        if bound < 0:
            return np.zeros((0, n), dtype=np.int64)
        estimate = ellipsoid_volume_estimate(form.gram, bound)
        if estimate > settings.ENUMERATION_BUDGET:
            raise BudgetExceededError("ellipsoid enumeration", estimate, settings.ENUMERATION_BUDGET)

        t = np.zeros(n) if center is None else np.asarray(center, dtype=float)
        R = np.linalg.cholesky(form.gram).T
        diag = np.diag(R)
        qd = diag ** 2
        qo = R / diag[:, None]
        slack = bound * (1 + 1e-9) + 1e-12
        blocks = []
        x = np.zeros(n)

        def descend(i: int, remaining: float) -> None:
            c = t[i] - np.dot(qo[i, i + 1:], x[i + 1:] - t[i + 1:])
            r = np.sqrt(max(remaining, 0.0) / qd[i])
            lo, hi = int(np.ceil(c - r)), int(np.floor(c + r))
            if i == 0:
                if hi >= lo:
                    block = np.tile(x, (hi - lo + 1, 1))
                    block[:, 0] = np.arange(lo, hi + 1)
                    blocks.append(block)
                return
            for v in range(lo, hi + 1):
                x[i] = v
                descend(i - 1, remaining - qd[i] * (v - c) ** 2)
            x[i] = 0.0

        descend(n - 1, slack)
        if not blocks:
            return np.zeros((0, n), dtype=np.int64)
        points = np.rint(np.vstack(blocks)).astype(np.int64)
        keep = EnumerationService._within(form, points, bound, t if center is not None else None)
        return _sorted_points(points[keep], n)

    @staticmethod
    def _within(form: QuadForm, points: np.ndarray, bound: float, center) -> np.ndarray:
        shifted = points - center if center is not None else points
        values = quadratic_values(form.gram, shifted)
        tol = settings.FLOAT_TOLERANCE * max(1.0, abs(bound))
        keep = values <= bound + tol
        if form.exact is not None and center is None and settings.EXACT_FALLBACK:
            exact_bound = to_fraction(bound)
            for k in np.flatnonzero(np.abs(values - bound) <= tol):
                keep[k] = exact_quadratic_value(form.exact, points[k]) <= exact_bound
        return keep

    @staticmethod
    def brute_force_ellipsoid(form: Union[QuadForm, np.ndarray], bound: float) -> np.ndarray:
        """Independent oracle: scan the box |cᵢ| ≤ sqrt(bound·(G⁻¹)ᵢᵢ)."""
        if not isinstance(form, QuadForm):
            form = QuadForm(form)
        n = form.dimension
        if bound < 0:
            return np.zeros((0, n), dtype=np.int64)
        radii = np.floor(np.sqrt(bound * np.diag(np.linalg.inv(form.gram))) + 1e-9).astype(int)
        axes = [np.arange(-r, r + 1) for r in radii]
        points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        keep = EnumerationService._within(form, points, bound, None)
        return _sorted_points(points[keep], n)

    @staticmethod
    def region_gauge(L: Lattice, frame: ArchFrame, region: Region,
                     right: Optional[ArchFrame] = None) -> Gauge:
        """
        The gauge of Ω(δ,1) or Ψ(δ,1) in the coordinates of L.

        Ω: max(√P, √(u/δ)); Ψ: max(√P, √(|X|²/δ)). γ ∈ region(δ,T) iff gauge ≤ T.
        """
        C = ArchGeomService.coordinate_matrix(L, frame, right)
        g_p = C.T @ C
        g_u = C[1:3].T @ C[1:3]
        g_x = C[[0, 3]].T @ C[[0, 3]]
        second = g_u if region.shape == "Omega" else g_x
        exact = (None, None)
        grams = exact_form_grams(L, frame) if right is None else None
        if grams is not None:
            delta = to_fraction(region.delta)
            e_second = grams[1] if region.shape == "Omega" else grams[2]
            exact = (grams[0], tuple(tuple(v / delta for v in row) for row in e_second))
        return Gauge((g_p, second / region.delta), f"{region.shape}(δ={region.delta})", exact)

    @staticmethod
    def points_in_gauge(gauge: Gauge, T: float) -> np.ndarray:
        """All c with gauge(c) ≤ T, via the surrogate ellipsoid Σ G_k ≤ K·T²."""
        surrogate, k = gauge.surrogate()
        candidates = EnumerationService.enumerate_ellipsoid(
            QuadForm(surrogate.gram), k * T * T)
        if not len(candidates):
            return candidates
        return candidates[EnumerationService.within_gauge(gauge, T, candidates)]

    @staticmethod
    def within_gauge(gauge: Gauge, T: float, candidates: np.ndarray) -> np.ndarray:
        """
        Mask of gauge(c) ≤ T over coefficient vectors.

        Values within the float tolerance of T are re-tested with the exact
        grams when the gauge has them.
        """
        candidates = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
        if not candidates.size:
            return np.zeros(0, dtype=bool)
        T2 = T * T
        tol = settings.FLOAT_TOLERANCE * max(1.0, T2)
        values = np.stack([quadratic_values(g, candidates) for g in gauge.grams])
        keep = (values <= T2 + tol).all(axis=0)
        exact_ok = settings.EXACT_FALLBACK and gauge.exact and all(e is not None for e in gauge.exact)
        if exact_ok:
            exact_T2 = to_fraction(T) ** 2
            near = np.flatnonzero((np.abs(values - T2) <= tol).any(axis=0))
            for idx in near:
                keep[idx] = all(
                    exact_quadratic_value(e, candidates[idx]) <= exact_T2 for e in gauge.exact)
            if len(near):
                logger.debug(f"Decided {len(near)} boundary points exactly")
        return keep

    @staticmethod
    def region_points(L: Lattice, frame: ArchFrame, region: Region, star: bool = False,
                      right: Optional[ArchFrame] = None) -> np.ndarray:
        gauge = EnumerationService.region_gauge(L, frame, region, right)
        points = EnumerationService.points_in_gauge(gauge, region.T)
        if star:
            points = points[np.any(points != 0, axis=1)]
        return points

    @staticmethod
    def count_region(L: Lattice, frame: ArchFrame, region: Region) -> int:
        """|L ∩ region| (closed region, 0 included)."""
        count = len(EnumerationService.region_points(L, frame, region))
        logger.debug(f"|L ∩ {region.shape}(δ={region.delta}, T={region.T})| = {count}")
        return count

    @staticmethod
    def count_region_star(L: Lattice, frame: ArchFrame, region: Region) -> int:
        """|L ∩ region| without 0."""
        return len(EnumerationService.region_points(L, frame, region, star=True))

    @staticmethod
    def brute_force_count(L: Lattice, frame: ArchFrame, region: Region, box: int) -> int:
        """Independent oracle: test every coefficient vector in [−box, box]^rank with in_region."""
        count = 0
        for coeffs in product(range(-box, box + 1), repeat=L.rank):
            gamma = sum((q * c for q, c in zip(L.basis, coeffs)), L.algebra.element())
            if ArchGeomService.in_region(gamma, frame, region):
                count += 1
        return count

    @staticmethod
    def _as_gauge(gauge: Union[Gauge, QuadForm]) -> Gauge:
        return Gauge.from_quadform(gauge) if isinstance(gauge, QuadForm) else gauge

    @staticmethod
    def successive_minima(gauge: Union[Gauge, QuadForm]) -> MinimaReport:
        """
        λ₁ ≤ … ≤ λ_n of a gauge with independent witnesses.

        A reduced basis bounds λ_n by R = max f(vᵢ); every vector with
        f ≤ R is enumerated, sorted by f and picked greedily while it
        increases the rank.
        """
        gauge = EnumerationService._as_gauge(gauge)
        n = gauge.dimension
        H = greedy_improve(lll_reduce(gauge.surrogate()[0].gram), gauge)
        R = float(gauge(H).max())
        points = EnumerationService.points_in_gauge(gauge, R * (1 + 1e-9))
        points = points[np.any(points != 0, axis=1)]
        values = gauge(points)
        order = np.argsort(values, kind="stable")

        witnesses, minima = [], []
        for idx in order:
            trial = np.array(witnesses + [points[idx]], dtype=float)
            if np.linalg.matrix_rank(trial) == len(witnesses) + 1:
                witnesses.append(points[idx])
                minima.append(float(values[idx]))
                if len(witnesses) == n:
                    break
        return MinimaReport(
            minima=minima,
            witnesses=[[int(v) for v in w] for w in witnesses],
            gauges=minima,
        )

    @staticmethod
    def reduced_basis(gauge: Union[Gauge, QuadForm]) -> ReducedBasisReport:
        """LLL + greedy basis, reporting c_n = max f(vᵢ)/λᵢ."""
        gauge = EnumerationService._as_gauge(gauge)
        H = greedy_improve(lll_reduce(gauge.surrogate()[0].gram), gauge)
        gauges = [float(v) for v in gauge(H)]
        minima = EnumerationService.successive_minima(gauge).minima
        constant = max(g / m for g, m in zip(gauges, minima))
        return ReducedBasisReport(
            basis=[[int(v) for v in row] for row in H],
            gauges=gauges, minima=minima, constant=constant,
        )

    @staticmethod
    def count_law_check(gauge: Union[Gauge, QuadForm], T: float = 1.0,
                        band: Optional[float] = None) -> CountLawReport:
        """
        |{f ≤ T}| against ∏(1 + T/λᵢ).

        Args:
            gauge: gauge (or quadratic form) in lattice coordinates
            T: dilation of the body {f ≤ 1}
            band: accepted ratio range [1/band, band]

        Returns:
            CountLawReport: count, minima, product and ratio
        """
        gauge = EnumerationService._as_gauge(gauge)
        band = settings.CALIBRATION_CONSTANT if band is None else band
        count = len(EnumerationService.points_in_gauge(gauge, T))
        minima = EnumerationService.successive_minima(gauge).minima
        prod = float(np.prod([1 + T / m for m in minima]))
        ratio = count / prod
        return CountLawReport(count=count, minima=minima, product=prod, ratio=ratio,
                              band=band, within_band=1 / band <= ratio <= band)

    @staticmethod
    def ball_count_2d(basis: Sequence[Sequence[float]], center: Sequence[float], R: float) -> BallCountReport:
        """
        Points of a rank-2 lattice in the closed disc of radius R about center.

        Args:
            basis: two real row vectors (any ambient dimension)
            center: point of the ambient space
            R: radius

        Returns:
            BallCountReport: count and the bound 1 + R/λ₁ + R²/(λ₁λ₂)
        """
        B = np.asarray(basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != 2 or np.linalg.matrix_rank(B) != 2:
            raise RankTwoRequiredError(B.shape[0] if B.ndim == 2 else B.ndim)
        p = np.asarray(center, dtype=float)
        G = B @ B.T
        t, *_ = np.linalg.lstsq(B.T, p, rcond=None)
        offset = float(np.sum((p - t @ B) ** 2))
        count = len(EnumerationService.enumerate_ellipsoid(QuadForm(G), R * R - offset, center=t))
        lam1, lam2 = EnumerationService.successive_minima(QuadForm(G)).minima
        bound = 1 + R / lam1 + R * R / (lam1 * lam2)
        return BallCountReport(count=count, bound=bound, minima=(lam1, lam2))
