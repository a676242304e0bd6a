import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from sympy import divisor_count, divisors
from sympy.core.intfunc import igcdex

from app.archgeom import ArchFrame, ArchGeomService, CuspService, Region
from app.core.logging import get_logger
from app.core.rationals import format_rational, is_rational_square, to_fraction
from app.core.settings import settings
from app.enumeration import EnumerationService, QuadForm
from app.lattice import Lattice, LatticeService, OrderService, linalg, rational_gcd
from app.qalg import QuaternionService
from .exceptions import InvalidExperimentError, MalformedDeterminantError, SplitPsiRefusedError
from .schemas import (
    BoundReport,
    CountExperiment,
    DyadicPiece,
    DyadicReport,
    FiberedCountReport,
    SweepGrid,
)

# Configure logging
logger = get_logger(__name__)


@lru_cache(maxsize=64)
def partial_dual_order(d_B: int, N: int, ell: int) -> Lattice:
    """R(ℓ) for the builtin Eichler order of discriminant d_B and level N."""
    return OrderService.partial_dual(OrderService.build_order(d_B, N), ell)


@lru_cache(maxsize=64)
def traceless_partial_dual(d_B: int, N: int, ell: int) -> Lattice:
    """R(ℓ)⁰, the lattice every Type I / Type II count runs over."""
    return LatticeService.traceless_sublattice(partial_dual_order(d_B, N, ell))


def norm_gram(L: Lattice) -> Tuple[np.ndarray, int]:
    """Integer matrix S and scale E with nr(Σ cᵢbᵢ) = cᵀSc / E."""
    half = [[v / 2 for v in row] for row in LatticeService.gram(L)]
    ints, scale = linalg.scale_to_integers(half)
    return np.array(ints, dtype=np.int64), scale


def exact_norms(L: Lattice, points: np.ndarray) -> List[Fraction]:
    """Exact reduced norms (= determinants) of the given coefficient vectors."""
    points = np.asarray(points, dtype=np.int64)
    if not len(points):
        return []
    S, E = norm_gram(L)
    values = np.einsum("pi,ij,pj->p", points, S, points)
    return [Fraction(int(v), E) for v in values]


def _near(value: np.ndarray, bound: float) -> np.ndarray:
    """value ≤ bound up to the configured relative tolerance."""
    return value <= bound + settings.FLOAT_TOLERANCE * max(1.0, abs(bound))


class BoundsService:
    """Type I / Type II counts against their explicit bounds."""

    @staticmethod
    def lattice_for(exp: CountExperiment) -> Lattice:
        return traceless_partial_dual(exp.d_B, exp.N, exp.ell)

    @staticmethod
    def frame_for(exp: CountExperiment) -> ArchFrame:
        if exp.is_split:
            return ArchGeomService.sigma_z(exp.z)
        if exp.rotation_seed is None:
            return ArchGeomService.identity_frame("definite")
        return ArchGeomService.random_rotation(exp.rotation_seed)

    @staticmethod
    def height(exp: CountExperiment) -> Optional[float]:
        """H(z) for split experiments; None (the term is omitted) otherwise."""
        return CuspService.height_H(exp.z, exp.N) if exp.is_split else None

    @staticmethod
    def region_for(exp: CountExperiment, scale: float = 1.0) -> Region:
        return Region(shape=exp.shape, delta=exp.delta, T=exp.T * scale)

    # Bound formulas, implied constants set to 1

    @staticmethod
    def omega_bound(d_B: int, N: int, ell: int, delta: float, T: float,
                    H: Optional[float] = None) -> float:
        """1 + (ℓ^½ + ℓδ^½H)T + (ℓ^{3/2}δ^½/(d_BN)^½ + ℓδH)T² + ℓ²δ/(d_BN)·T³."""
        dn = d_B * N
        linear = sqrt(ell)
        quadratic = ell ** 1.5 * sqrt(delta) / sqrt(dn)
        if H is not None:
            linear += ell * sqrt(delta) * H
            quadratic += ell * delta * H
        return 1 + linear * T + quadratic * T ** 2 + ell ** 2 * delta / dn * T ** 3

    @staticmethod
    def psi_bound(d_B: int, N: int, ell: int, delta: float, T: float) -> float:
        """1 + ℓ^½T + ℓ^{3/2}/(d_BN)^½·T² + ℓ²δ^½/(d_BN)·T³."""
        dn = d_B * N
        return (1 + sqrt(ell) * T + ell ** 1.5 / sqrt(dn) * T ** 2
                + ell ** 2 * sqrt(delta) / dn * T ** 3)

    @staticmethod
    def type1_bound(exp: CountExperiment) -> float:
        if exp.shape == "Psi":
            if exp.is_split:
                raise SplitPsiRefusedError()
            return BoundsService.psi_bound(exp.d_B, exp.N, exp.ell, exp.delta, exp.T)
        return BoundsService.omega_bound(exp.d_B, exp.N, exp.ell, exp.delta, exp.T,
                                         BoundsService.height(exp))

    @staticmethod
    def threshold(exp: CountExperiment) -> float:
        """Lower bound for λ₁: min{ℓ^{-½}, ℓ^{-1}δ^{-½}H^{-1}} (split Ω) or ℓ^{-½}."""
        value = 1 / sqrt(exp.ell)
        if exp.is_split and exp.shape == "Omega":
            value = min(value, 1 / (exp.ell * sqrt(exp.delta) * BoundsService.height(exp)))
        return value

    @staticmethod
    def first_minimum(exp: CountExperiment) -> float:
        """λ₁ of g⁻¹R(ℓ)⁰g with respect to the region at T = 1."""
        gauge = EnumerationService.region_gauge(
            BoundsService.lattice_for(exp), BoundsService.frame_for(exp),
            Region(shape=exp.shape, delta=exp.delta, T=1.0))
        return EnumerationService.successive_minima(gauge).minima[0]

    @staticmethod
    def _report(kind: str, exp: CountExperiment, observed: int, bound: float,
                started: float) -> BoundReport:
        return BoundReport(
            kind=kind, d_B=exp.d_B, N=exp.N, ell=exp.ell, delta=exp.delta, T=exp.T,
            n=None if exp.n is None else format_rational(exp.n),
            H=BoundsService.height(exp),
            observed=observed, bound=bound, ratio=observed / bound if bound > 0 else 0.0,
            first_minimum=BoundsService.first_minimum(exp),
            threshold=BoundsService.threshold(exp),
            wall_ms=(time.perf_counter() - started) * 1000,
        )

    @staticmethod
    def type1_report(exp: CountExperiment) -> BoundReport:
        """
        |g⁻¹R(ℓ)⁰g ∩ region*(δ,T)| against the Type I bound.

        Args:
            exp: experiment; Ψ only for non-split algebras

        Returns:
            BoundReport: observed nonzero count, bound, ratio, λ₁ and threshold
        """
        started = time.perf_counter()
        bound = BoundsService.type1_bound(exp)
        observed = EnumerationService.count_region_star(
            BoundsService.lattice_for(exp), BoundsService.frame_for(exp),
            BoundsService.region_for(exp))
        kind = "type1" if exp.shape == "Omega" else "type1_psi"
        report = BoundsService._report(kind, exp, observed, bound, started)
        logger.info(f"✓ {kind} d_B={exp.d_B} N={exp.N} ℓ={exp.ell} δ={exp.delta} T={exp.T}: "
                    f"{observed}/{bound:.4g} = {report.ratio:.4g}")
        return report

    @staticmethod
    def _require_n(exp: CountExperiment) -> Fraction:
        if exp.n is None:
            raise MalformedDeterminantError(None, exp.ell)
        return exp.n

    @staticmethod
    def determinant_partition(exp: CountExperiment) -> Dict[Fraction, int]:
        """Nonzero points of the region grouped by their exact determinant."""
        L = BoundsService.lattice_for(exp)
        points = EnumerationService.region_points(
            L, BoundsService.frame_for(exp), BoundsService.region_for(exp), star=True)
        return dict(sorted(Counter(exact_norms(L, points)).items()))

    @staticmethod
    def attained_determinants(exp: CountExperiment) -> List[str]:
        """Determinants occurring on the nonzero points of the region, as "p/q"."""
        return [format_rational(n) for n in BoundsService.determinant_partition(exp)]

    @staticmethod
    def type2_count(exp: CountExperiment) -> int:
        """|g⁻¹R(ℓ)⁰g ∩ region*(δ,T) ∩ det⁻¹{n}|, determinants compared exactly."""
        n = BoundsService._require_n(exp)
        if not exp.is_split and n == 0:
            return 0
        if abs(n) > to_fraction(exp.T) ** 2:
            return 0
        L = BoundsService.lattice_for(exp)
        points = EnumerationService.region_points(
            L, BoundsService.frame_for(exp), BoundsService.region_for(exp), star=True)
        return sum(1 for value in exact_norms(L, points) if value == n)

    @staticmethod
    def typeII_split_square_flag(exp: CountExperiment) -> bool:
        """Whether −n is a rational square (the extra δ^½TℓH allowance applies)."""
        if not exp.is_split:
            raise InvalidExperimentError("the −n square test concerns split algebras")
        return is_rational_square(-BoundsService._require_n(exp))

    @staticmethod
    def type2_bound(exp: CountExperiment) -> float:
        """1 + ℓδ^½HT + ℓ²δT²/(d_BN), plus δ^½TℓH when −n is a square (split)."""
        BoundsService._require_n(exp)
        dn = exp.d_B * exp.N
        bound = 1 + exp.ell ** 2 * exp.delta * exp.T ** 2 / dn
        if exp.is_split:
            H = BoundsService.height(exp)
            bound += exp.ell * sqrt(exp.delta) * H * exp.T
            if BoundsService.typeII_split_square_flag(exp):
                bound += sqrt(exp.delta) * exp.T * exp.ell * H
        return bound

    @staticmethod
    def type2_refined_bound(exp: CountExperiment) -> float:
        """1 + τ(d_BN)(1 + ℓ²/(d_BN)·min{δ^½T², δT⁴/|n|}) for definite algebras."""
        n = BoundsService._require_n(exp)
        if exp.is_split:
            raise InvalidExperimentError("the divisor-function bound concerns definite algebras")
        dn = exp.d_B * exp.N
        area = sqrt(exp.delta) * exp.T ** 2
        if n != 0:
            area = min(area, exp.delta * exp.T ** 4 / abs(float(n)))
        return 1 + int(divisor_count(dn)) * (1 + exp.ell ** 2 / dn * area)

    @staticmethod
    def type2_report(exp: CountExperiment, refined: bool = False) -> BoundReport:
        started = time.perf_counter()
        if refined:
            kind, bound = "type2_refined", BoundsService.type2_refined_bound(exp)
        else:
            kind, bound = "type2", BoundsService.type2_bound(exp)
        observed = BoundsService.type2_count(exp)
        report = BoundsService._report(kind, exp, observed, bound, started)
        logger.info(f"✓ {kind} d_B={exp.d_B} N={exp.N} ℓ={exp.ell} n={exp.n} T={exp.T}: "
                    f"{observed}/{bound:.4g}")
        return report

    @staticmethod
    def type1_split_fibered(exp: CountExperiment) -> FiberedCountReport:
        """
        Split Type I count fibered by the lower-left entry c.

        With β = [[a, b], [c, −a]] the conjugate by σ_z has
        u = |2az + b − cz²|²/(4y²), so each fiber is the set of points of the
        rank-2 lattice {2az + b} in the disc about cz² of radius 2yδ^½T,
        cut down by P ≤ T². Disc counts are bounded with ball_count_2d.
        """
        if not exp.is_split or exp.shape != "Omega":
            raise InvalidExperimentError("fibering by c needs a split algebra and Ω")
        L = BoundsService.lattice_for(exp)
        frame = BoundsService.frame_for(exp)
        z = exp.z
        mats = [QuaternionService.to_matrix(q) for q in L.basis]
        lower = [m[1][0] for m in mats]
        kernel = np.array(linalg.integer_kernel(lower), dtype=np.int64)
        step = rational_gcd(lower)
        # coefficient vector with lower-left entry equal to step
        ints, _ = linalg.scale_to_integers([lower])
        weights = ints[0]
        offset, g = [0] * len(weights), 0
        for i, w in enumerate(weights):
            s, t, h = igcdex(g, w)
            offset = [int(s) * o for o in offset]
            offset[i] += int(t)
            g = int(h)
        if g < 0:
            offset, g = [-o for o in offset], -g
        offset = np.array(offset, dtype=np.int64)

        def plane(coeffs: np.ndarray) -> np.ndarray:
            a = sum(int(c) * m[0][0] for c, m in zip(coeffs, mats))
            b = sum(int(c) * m[0][1] for c, m in zip(coeffs, mats))
            w = 2 * float(a) * z + float(b)
            return np.array([w.real, w.imag])

        K = np.array([plane(k) for k in kernel])
        region = BoundsService.region_for(exp)
        gauge = EnumerationService.region_gauge(L, frame, region)
        radius = 2 * z.imag * sqrt(exp.delta) * exp.T
        c_max = int(np.floor(sqrt(2) * exp.T / (z.imag * float(step)) + 1e-9))
        fibered = disc_total = fibers = 0
        summed = 0.0
        for k in range(-c_max, c_max + 1):
            c_value = float(k * step)
            center = complex(c_value * z * z)
            shift = plane(k * offset)
            target = np.array([center.real, center.imag]) - shift
            t = np.linalg.solve(K.T, target)
            disc = EnumerationService.enumerate_ellipsoid(QuadForm(K @ K.T), radius ** 2, center=t)
            ball = EnumerationService.ball_count_2d(K, target, radius)
            disc_total += ball.count
            summed += ball.bound
            fibers += 1
            if not len(disc):
                continue
            coeffs = k * offset[None, :] + disc @ kernel
            coeffs = coeffs[np.any(coeffs != 0, axis=1)]
            fibered += int(np.count_nonzero(EnumerationService.within_gauge(gauge, exp.T, coeffs)))
        direct = EnumerationService.count_region_star(L, frame, region)
        if fibered != direct:
            logger.error(f"✗ Fibered count {fibered} differs from direct count {direct}")
        else:
            logger.info(f"✓ Fibered count over {fibers} fibers matches direct count {direct}")
        return FiberedCountReport(direct_count=direct, fibered_count=fibered,
                                  disc_count=disc_total, summed_bound=summed,
                                  fibers=fibers, agrees=fibered == direct)

    @staticmethod
    def dyadic_pieces(delta: float) -> List[Optional[float]]:
        """None for Ω(1/16, 4δ^½T), then δ_j = 2^{-j} for 16δ ≤ δ_j ≤ 1."""
        pieces: List[Optional[float]] = [None]
        delta_j = 1.0
        while delta_j >= 16 * delta:
            pieces.append(delta_j)
            delta_j /= 2
        return pieces

    @staticmethod
    def dyadic_typeII_reduction(exp: CountExperiment) -> DyadicReport:
        """
        Cover Ω(δ,T) ∩ det⁻¹{n} by Ω(1/16, 4δ^½T) and the shells
        ½δ_jT² ≤ P ≤ δ_jT², u ≤ δT², each inside Ω(δ/δ_j, δ_j^½T).

        Args:
            exp: Ω experiment with n

        Returns:
            DyadicReport: per-piece counts, pointwise cover and piece sum
        """
        n = BoundsService._require_n(exp)
        if exp.shape != "Omega":
            raise InvalidExperimentError("the dyadic reduction is stated for Ω")
        L = BoundsService.lattice_for(exp)
        frame = BoundsService.frame_for(exp)
        C = ArchGeomService.coordinate_matrix(L, frame)
        T, delta = exp.T, exp.delta
        T2 = T * T

        def fiber(region: Region) -> np.ndarray:
            points = EnumerationService.region_points(L, frame, region, star=True)
            keep = [value == n for value in exact_norms(L, points)]
            return points[np.array(keep, dtype=bool)] if len(points) else points

        def forms(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            P, u, _, _ = ArchGeomService.forms((C @ points.T).T, frame.kind)
            return np.atleast_1d(P), np.atleast_1d(u)

        direct = fiber(Region(shape="Omega", delta=delta, T=T))
        dP, du = forms(direct) if len(direct) else (np.zeros(0), np.zeros(0))
        covered = np.zeros(len(direct), dtype=bool)
        pieces = []
        for delta_j in BoundsService.dyadic_pieces(delta):
            if delta_j is None:
                container = Region(shape="Omega", delta=1 / 16, T=4 * sqrt(delta) * T)
                in_piece = _near(dP, 16 * delta * T2) & _near(du, delta * T2)
                points = fiber(container)
                count_piece = len(points)
                label = "Omega(1/16, 4δ^½T)"
            else:
                container = Region(shape="Omega", delta=delta / delta_j, T=sqrt(delta_j) * T)
                lower = delta_j * T2 / 2
                in_piece = (_near(dP, delta_j * T2) & _near(du, delta * T2)
                            & (dP >= lower * (1 - settings.FLOAT_TOLERANCE)))
                points = fiber(container)
                if len(points):
                    P, _ = forms(points)
                    count_piece = int(np.count_nonzero(P >= lower * (1 - settings.FLOAT_TOLERANCE)))
                else:
                    count_piece = 0
                label = f"shell δ_j={delta_j:g}"
            covered |= in_piece
            pieces.append(DyadicPiece(label=label, delta_j=delta_j, count_piece=count_piece,
                                      count_container=len(points)))
        report = DyadicReport(direct_count=len(direct), pieces=pieces,
                              covered=bool(covered.all()),
                              sum_pieces=sum(p.count_piece for p in pieces))
        if report.covered and report.sum_pieces >= report.direct_count:
            logger.info(f"✓ Dyadic cover of {len(direct)} points by {len(pieces)} pieces")
        else:
            logger.error(f"✗ Dyadic cover failed: {report.model_dump()}")
        return report

    @staticmethod
    def expand_grid(grid: SweepGrid, kinds: Tuple[str, ...] = ("type1", "type2")
                    ) -> List[Tuple[str, CountExperiment]]:
        """
        All (kind, experiment) jobs of a grid; invalid level/divisor pairs are skipped.

        Without an explicit `n` list the Type II jobs of each (ℓ, frame, δ, T)
        are the determinants attained there, so the region is enumerated once
        while expanding.
        """
        jobs: List[Tuple[str, CountExperiment]] = []
        for d_B in grid.d_B:
            for N in grid.N:
                if d_B > 1 and N % d_B == 0:
                    continue
                dn = d_B * N
                ells = [e for e in (grid.ell or divisors(dn)) if dn % e == 0]
                if d_B == 1:
                    points = list(grid.points)
                    points += [(x, c / sqrt(N)) for x, c in grid.level_points]
                    points += [(w.real, w.imag) for w in
                               (CuspService.al_random_point(N, s) for s in grid.al_random_seeds)]
                    frames = [dict(x=x, y=y) for x, y in points]
                else:
                    frames = [dict(rotation_seed=None)] + [
                        dict(rotation_seed=s) for s in grid.al_random_seeds]
                for ell in ells:
                    for frame in frames:
                        for delta in grid.delta:
                            for T in grid.T:
                                base = dict(d_B=d_B, N=N, ell=int(ell), delta=delta, T=T, **frame)
                                shapes = grid.shapes if "type1" in kinds else []
                                for shape in shapes:
                                    if shape == "Psi" and d_B == 1:
                                        continue
                                    jobs.append(("type1", CountExperiment(shape=shape, **base)))
                                if "type2" not in kinds:
                                    continue
                                determinants = grid.n or BoundsService.attained_determinants(
                                    CountExperiment(**base))
                                for n in determinants:
                                    if (to_fraction(n) * ell).denominator != 1:
                                        continue
                                    jobs.append(("type2", CountExperiment(n=n, **base)))
        return jobs

    @staticmethod
    def sweep(grid: SweepGrid, workers: Optional[int] = None,
              kinds: Tuple[str, ...] = ("type1", "type2")) -> List[BoundReport]:
        """
        Run every job of a grid, concurrently when workers > 1.

        Results are sorted by their key columns, so output does not depend
        on scheduling.
        """
        workers = settings.DEFAULT_WORKERS if workers is None else workers
        jobs = BoundsService.expand_grid(grid, kinds)
        payloads = [(kind, exp.model_dump()) for kind, exp in jobs]
        logger.info(f"Running {len(jobs)} counting jobs with {workers} worker(s)")
        if workers <= 1:
            rows = [run_job(p) for p in payloads]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(run_job, payloads))
        reports = [BoundReport.model_validate(r) for r in rows]
        reports.sort(key=lambda r: (r.kind, r.d_B, r.N, r.ell, r.delta, r.T, r.n or "",
                                    r.H or 0.0, r.observed))
        worst = max((r.ratio for r in reports), default=0.0)
        logger.info(f"✓ Sweep finished, max ratio {worst:.4g}")
        return reports

    @staticmethod
    def max_ratios(reports: Iterable[BoundReport]) -> Dict[str, float]:
        result: Dict[str, float] = {}
        for r in reports:
            result[r.kind] = max(result.get(r.kind, 0.0), r.ratio)
        return result


def run_job(payload: Tuple[str, Dict[str, Any]]) -> Dict[str, Any]:
    """Worker entry point: one (kind, experiment) job to a report dict."""
    kind, data = payload
    exp = CountExperiment.model_validate(data)
    if kind == "type1":
        report = BoundsService.type1_report(exp)
    else:
        report = BoundsService.type2_report(exp)
    return report.model_dump()
