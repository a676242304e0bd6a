"""
Structural checks behind the counting bounds.

Commutator congruences, the trace / traceless norm decomposition, pair
counts with equal determinant, invariants of anisotropic ternary lattices
and representation counts of binary forms.
"""
from collections import Counter
from fractions import Fraction
from itertools import product
from math import sqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from app.archgeom import ArchFrame, ArchGeomService, Region, hamilton_mul
from app.core.logging import get_logger
from app.core.rationals import to_fraction
from app.core.settings import settings
from app.enumeration import EnumerationService, QuadForm
from app.enumeration.schemas import exact_quadratic_value
from app.lattice import DegenerateGramError, Lattice, LatticeService, OrderService, linalg
from app.qalg import AlgebraSpec, Quat, QuaternionService
from .exceptions import (
    DegenerateBinaryFormError,
    InvalidExperimentError,
    IsotropicLatticeError,
    MajorantViolationError,
    PairCountCapExceededError,
)
from .schemas import (
    ArchRatioReport,
    BinaryRepReport,
    CommutatorReport,
    CountExperiment,
    PairCountReport,
    Prop8Report,
    Prop8Sample,
)
from .services import BoundsService, exact_norms, norm_gram, partial_dual_order, traceless_partial_dual

# Configure logging
logger = get_logger(__name__)

COMMUTATOR_MODES = ("order", "dual", "traceless_partial")


def _box(rank: int, radius: int) -> np.ndarray:
    axis = range(-radius, radius + 1)
    return np.array(list(product(axis, repeat=rank)), dtype=np.int64)


def _split_matrices(abcd: np.ndarray) -> np.ndarray:
    a, b, c, d = np.moveaxis(abcd, -1, 0)
    return np.stack([np.stack([d + c, b + a], -1), np.stack([b - a, d - c], -1)], -2)


def _split_coords(m: np.ndarray) -> np.ndarray:
    return np.stack([
        (m[..., 0, 1] - m[..., 1, 0]) / 2,
        (m[..., 0, 1] + m[..., 1, 0]) / 2,
        (m[..., 0, 0] - m[..., 1, 1]) / 2,
        (m[..., 0, 0] + m[..., 1, 1]) / 2,
    ], -1)


def _disc(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(size=count))
    theta = rng.uniform(0.0, 2 * np.pi, size=count)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], -1)


def sample_omega(delta: float, T: float, count: int, seed: int = 0) -> np.ndarray:
    """Random (a, b, c, d) in Ω(δ,T): (a, d) and (b, c) from discs, rejected on P > T²."""
    rng = np.random.default_rng(seed)
    chunks, total = [], 0
    while total < count:
        ad = _disc(rng, 2 * count, T)
        bc = _disc(rng, 2 * count, sqrt(delta) * T)
        abcd = np.stack([ad[:, 0], bc[:, 0], bc[:, 1], ad[:, 1]], -1)
        abcd = abcd[(abcd ** 2).sum(axis=1) <= T * T]
        chunks.append(abcd)
        total += len(abcd)
    return np.vstack(chunks)[:count]


class ChecksService:
    """Exact and sampled checks of the lemmas the counting bounds rest on."""

    @staticmethod
    def commutator_lattices(d_B: int, N: int, ell: int, mode: str) -> Tuple[Lattice, Lattice, Fraction]:
        """
        (source, target, modulus) for a congruence mode.

        order: x, y ∈ R gives [x,y] ∈ R and nr ∈ d_BN·Z.
        dual: x, y ∈ R^∨ gives [x,y] ∈ (d_BN)⁻¹R and nr ∈ (d_BN)⁻²Z.
        traceless_partial: x, y ∈ R(ℓ)⁰ gives [x,y] ∈ ℓ⁻¹R⁰ and nr ∈ (d_BN/ℓ³)Z.
        """
        R = OrderService.build_order(d_B, N)
        dn = d_B * N
        if mode == "order":
            return R, R, Fraction(dn)
        if mode == "dual":
            return (LatticeService.dual_lattice(R), LatticeService.scale(R, Fraction(1, dn)),
                    Fraction(1, dn * dn))
        if mode == "traceless_partial":
            R0 = LatticeService.traceless_sublattice(R)
            return (traceless_partial_dual(d_B, N, ell), LatticeService.scale(R0, Fraction(1, ell)),
                    Fraction(dn, ell ** 3))
        raise InvalidExperimentError(f"unknown commutator mode {mode!r}, use one of {COMMUTATOR_MODES}")

    @staticmethod
    def commutator_checks(d_B: int, N: int, ell: int = 1, mode: str = "order",
                          box_radius: int = 1) -> CommutatorReport:
        """
        Exhaustive commutator congruences over a coefficient box.

        The structure tensor of [bᵢ, bⱼ] in target coordinates is scaled to
        integers once; every pair of box vectors is then checked with integer
        arithmetic.

        Args:
            d_B: builtin discriminant
            N: level
            ell: divisor of d_B·N (traceless_partial mode)
            mode: "order", "dual" or "traceless_partial"
            box_radius: coordinates range over [−r, r]

        Returns:
            CommutatorReport: failure counts for membership and for the norm
        """
        source, target, modulus = ChecksService.commutator_lattices(d_B, N, ell, mode)
        n, m = source.rank, target.rank
        tensor = [[LatticeService.coordinates(target, QuaternionService.commutator(p, q))
                   for q in source.basis] for p in source.basis]
        flat = [[v for row in tensor for coords in row for v in coords]]
        ints, D = linalg.scale_to_integers(flat)
        T = np.array(ints[0], dtype=np.int64).reshape(n, n, m)
        S, E = norm_gram(target)
        box = _box(n, box_radius)
        member_fail = norm_fail = 0
        norm_den = E * D * D * modulus.numerator
        for start in range(0, len(box), 64):
            chunk = box[start:start + 64]
            t = np.einsum("pi,qj,ijk->pqk", chunk, box, T)
            member_fail += int(np.count_nonzero(np.any(t % D != 0, axis=-1)))
            values = np.einsum("pqk,kl,pql->pq", t, S, t) * modulus.denominator
            norm_fail += int(np.count_nonzero(values % norm_den != 0))
        report = CommutatorReport(kind=mode, pairs=len(box) ** 2, membership_failures=member_fail,
                                  norm_failures=norm_fail, norm_modulus=str(modulus))
        if report.passed:
            logger.info(f"✓ Commutator congruences ({mode}) hold on {report.pairs} pairs")
        else:
            logger.error(f"✗ Commutator congruences ({mode}): {member_fail} membership, "
                         f"{norm_fail} norm failures")
        return report

    @staticmethod
    def commutator_abcd(x: np.ndarray, y: np.ndarray, kind: str) -> np.ndarray:
        """[x, y] for (…, 4) arrays of archimedean coordinates."""
        if kind == "split":
            mx, my = _split_matrices(x), _split_matrices(y)
            return _split_coords(mx @ my - my @ mx)
        hx = np.asarray(x)[..., ::-1]
        hy = np.asarray(y)[..., ::-1]
        return (hamilton_mul(hx, hy) - hamilton_mul(hy, hx))[..., ::-1]

    @staticmethod
    def commutator_arch_ratio(kind: str, delta: float, T: float = 1.0, samples: int = 2000,
                              seed: int = 0, pairs: Optional[Tuple[np.ndarray, np.ndarray]] = None,
                              band: Optional[float] = None) -> ArchRatioReport:
        """
        max |q([x,y])|/(δT⁴) and max P([x,y])/(δT⁴) for x, y in Ω(δ,T).

        Args:
            kind: "split" or "definite"
            delta: region parameter δ
            T: region parameter T
            samples: random pairs when `pairs` is not given
            seed: RNG seed
            pairs: explicit (x, y) coordinate arrays

        Returns:
            ArchRatioReport: maxima and whether both stay within the band
        """
        band = settings.CALIBRATION_CONSTANT if band is None else band
        if pairs is None:
            x = sample_omega(delta, T, samples, seed)
            y = sample_omega(delta, T, samples, seed + 1)
        else:
            x, y = (np.atleast_2d(np.asarray(p, dtype=float)) for p in pairs)
        P, _, _, det = ArchGeomService.forms(ChecksService.commutator_abcd(x, y, kind), kind)
        scale = delta * T ** 4
        q_ratio = float(np.max(np.abs(det))) / scale
        p_ratio = float(np.max(P)) / scale
        return ArchRatioReport(samples=len(x), max_q_ratio=q_ratio, max_P_ratio=p_ratio,
                               band=band, within_band=max(q_ratio, p_ratio) <= band)

    @staticmethod
    def norm_decomposition_check(gamma: Quat) -> bool:
        """det(γ) = ¼tr(γ)² + det(γ⁰) with γ⁰ = γ − ½tr(γ), exactly."""
        t = gamma.trace()
        traceless = gamma - gamma.algebra.one() * (t / 2)
        return gamma.norm() == t * t / 4 + traceless.norm()

    @staticmethod
    def norm_decomposition_sweep(algebra: AlgebraSpec, count: int = 200, seed: int = 0,
                                 height: int = 20) -> int:
        """Number of failures over random elements with coordinates p/q, |p|, q ≤ height."""
        rng = np.random.default_rng(seed)
        failures = 0
        for _ in range(count):
            nums = rng.integers(-height, height + 1, size=4)
            dens = rng.integers(1, height + 1, size=4)
            gamma = algebra.element(*(Fraction(int(p), int(q)) for p, q in zip(nums, dens)))
            failures += not ChecksService.norm_decomposition_check(gamma)
        return failures

    @staticmethod
    def _pairs(norms: Sequence[Fraction]) -> int:
        return sum(m * m for m in Counter(norms).values())

    @staticmethod
    def _capped_pairs(L: Lattice, points: np.ndarray) -> int:
        if len(points) ** 2 > settings.PAIR_COUNT_CAP:
            raise PairCountCapExceededError(len(points), settings.PAIR_COUNT_CAP)
        return ChecksService._pairs(exact_norms(L, points))

    @staticmethod
    def pair_count_equal_det(L: Lattice, frame: ArchFrame, region: Region) -> int:
        """Ordered pairs (γ₁, γ₂) of nonzero points of L ∩ region with det γ₁ = det γ₂."""
        points = EnumerationService.region_points(L, frame, region, star=True)
        return ChecksService._capped_pairs(L, points)

    @staticmethod
    def splitting_inequality_checks(exp: CountExperiment) -> PairCountReport:
        """
        Pairs in R(ℓ;g) against the traceless counts over the doubled region.

        The splitting constant is LHS / (|R⁰ ∩ region(δ,2T)|² + w·pairs⁰) with
        w = T (Ω) or δ^½T (Ψ). The fiber bound pairs⁰ ≤ |R⁰ ∩ region(δ,2T)| ×
        max fiber is exact; Ψ fibers are taken in Ω(1,2T) with |n| ≤ 4T².
        """
        full = partial_dual_order(exp.d_B, exp.N, exp.ell)
        traceless = traceless_partial_dual(exp.d_B, exp.N, exp.ell)
        frame = BoundsService.frame_for(exp)
        full_points = EnumerationService.region_points(full, frame, BoundsService.region_for(exp), star=True)
        pairs = ChecksService._capped_pairs(full, full_points)

        doubled = BoundsService.region_for(exp, scale=2.0)
        points0 = EnumerationService.region_points(traceless, frame, doubled)
        pairs0 = ChecksService._capped_pairs(traceless, points0)
        norms0 = exact_norms(traceless, points0)
        if exp.shape == "Omega":
            weight = exp.T
            fiber_norms = norms0
        else:
            weight = sqrt(exp.delta) * exp.T
            wide = EnumerationService.region_points(
                traceless, frame, Region(shape="Omega", delta=1.0, T=2 * exp.T))
            fiber_norms = exact_norms(traceless, wide)
        limit = 4 * to_fraction(exp.T) ** 2
        fibers = Counter(v for v in fiber_norms if abs(v) <= limit)
        max_fiber = max(fibers.values(), default=0)
        rhs = len(points0) ** 2 + weight * pairs0

        inclusion = True
        for b in full.basis:
            t = b.trace()
            if t.denominator != 1 or not LatticeService.contains(traceless, 2 * b - full.algebra.one() * t):
                inclusion = False
        report = PairCountReport(
            shape=exp.shape, points=len(full_points),
            pairs=pairs, traceless_points=len(points0), traceless_pairs=pairs0,
            max_fiber=max_fiber, fiber_bound_holds=pairs0 <= len(points0) * max_fiber,
            splitting_constant=pairs / rhs if rhs else 0.0, inclusion_holds=inclusion,
        )
        logger.info(f"✓ Pair counts ({exp.shape}): {pairs} pairs, constant "
                    f"{report.splitting_constant:.4g}")
        return report

    @staticmethod
    def _assert_anisotropic(L: Lattice, Q: np.ndarray) -> None:
        if L.algebra.is_definite:
            return
        form = QuadForm(Q)
        radius = 2 * EnumerationService.successive_minima(form).minima[-1]
        points = EnumerationService.enumerate_ellipsoid(form, radius ** 2)
        points = points[np.any(points != 0, axis=1)]
        for point, value in zip(points, exact_norms(L, points)):
            if value == 0:
                raise IsotropicLatticeError([int(v) for v in point])

    @staticmethod
    def prop8_checks(L: Lattice, Q: Optional[np.ndarray] = None, frame: Optional[ArchFrame] = None,
                     X_values: Sequence[float] = (1.0, 2.0, 4.0, 8.0),
                     band: Optional[float] = None) -> Prop8Report:
        """
        Successive minima of an anisotropic ternary lattice against C, N, Δ.

        q is the reduced norm on L and Q a majorant (by default P at the
        frame). With μ the generalized eigenvalues of (q, Q): C = content/max|μ|,
        N = level/min|μ| and Δ = det Q. Checks λ₁² ≥ C, λ₁λ₂λ₃ ≍ Δ^½,
        λ₁λ₂ ≫ (Δ/N)^½ and the count 1 + X/√C + X²/√(Δ/N) + X³/√Δ.

        Args:
            L: rank-3 lattice
            Q: Gram matrix of the majorant in the basis of L
            frame: frame for the default majorant
            X_values: radii of the count sweep
            band: calibration constant

        Returns:
            Prop8Report: invariants, minima and the check outcomes
        """
        band = settings.CALIBRATION_CONSTANT if band is None else band
        if Q is None:
            kind = "definite" if L.algebra.is_definite else "split"
            frame = frame or ArchGeomService.identity_frame(kind)
            C = ArchGeomService.coordinate_matrix(L, frame)
            Q = C.T @ C
        Q = np.asarray(Q, dtype=float)
        ChecksService._assert_anisotropic(L, Q)

        S = np.array([[float(v) / 2 for v in row] for row in LatticeService.gram(L)])
        mu = np.abs(eigh(S, Q, eigvals_only=True))
        if mu.min() == 0:
            raise DegenerateGramError(L.rank)
        invariants = LatticeService.gram_invariants(L)
        content = float(invariants.content) / mu.max()
        level = float(invariants.level) / mu.min()
        disc = float(np.linalg.det(Q))

        minima = EnumerationService.successive_minima(QuadForm(Q)).minima
        lam1_ok = minima[0] ** 2 >= content * (1 - settings.FLOAT_TOLERANCE)
        product_ratio = float(np.prod(minima)) / sqrt(disc)
        partial_ratio = minima[0] * minima[1] / sqrt(disc / level)
        samples = []
        for X in X_values:
            count = len(EnumerationService.enumerate_ellipsoid(QuadForm(Q), X * X))
            bound = 1 + X / sqrt(content) + X ** 2 / sqrt(disc / level) + X ** 3 / sqrt(disc)
            samples.append(Prop8Sample(X=X, count=count, bound=bound, ratio=count / bound))
        within = (1 / band <= product_ratio <= band and partial_ratio >= 1 / band
                  and all(s.ratio <= band for s in samples))
        report = Prop8Report(content=content, level=level, discriminant=disc, minima=minima,
                             lambda1_ok=lam1_ok, product_ratio=product_ratio,
                             partial_ratio=partial_ratio, samples=samples, band=band,
                             within_band=within)
        if lam1_ok and within:
            logger.info(f"✓ Ternary lattice invariants: λ = {[round(m, 6) for m in minima]}")
        else:
            logger.error(f"✗ Ternary lattice check failed: {report.model_dump()}")
        return report

    @staticmethod
    def binary_rep_count(q: Sequence[Sequence], Q: Sequence[Sequence[float]], n, X: float) -> int:
        """
        |{β ∈ Z² : q(β) = n, Q(β) ≤ X²}| with q compared exactly.

        Args:
            q: Gram matrix of the integral binary form (rationals allowed, e.g. "1/2")
            Q: positive-definite majorant with |q| ≤ Q
            n: nonzero target value
            X: radius, at least 1

        Returns:
            int: number of representations
        """
        exact = tuple(tuple(to_fraction(v) for v in row) for row in q)
        if linalg.determinant(exact) == 0:
            raise DegenerateBinaryFormError()
        n = to_fraction(n)
        if n == 0 or X < 1:
            raise InvalidExperimentError("binary representation counts need n ≠ 0 and X ≥ 1")
        Qf = np.asarray(Q, dtype=float)
        mu = np.abs(eigh(np.array([[float(v) for v in row] for row in exact]), Qf,
                         eigvals_only=True))
        if mu.max() > 1 + settings.FLOAT_TOLERANCE:
            raise MajorantViolationError(float(mu.max()))
        points = EnumerationService.enumerate_ellipsoid(QuadForm(Qf), X * X)
        return sum(1 for p in points if exact_quadratic_value(exact, p) == n)

    @staticmethod
    def binary_rep_sweep(q: Sequence[Sequence], Q: Sequence[Sequence[float]],
                         ns: Sequence, Xs: Sequence[float]) -> List[BinaryRepReport]:
        """Counts against (X|n|)^{1/4} over a grid of n and X."""
        reports = []
        for n in ns:
            for X in Xs:
                count = ChecksService.binary_rep_count(q, Q, n, X)
                scale = (X * abs(float(to_fraction(n)))) ** 0.25
                reports.append(BinaryRepReport(count=count, scale=scale, ratio=count / scale))
        return reports

    @staticmethod
    def partition_check(exp: CountExperiment) -> Tuple[int, int]:
        """(Σₙ type2_count(n), count_region_star) over the determinants that occur."""
        total = sum(BoundsService.type2_count(exp.model_copy(update={"n": n}))
                    for n in BoundsService.determinant_partition(exp))
        direct = EnumerationService.count_region_star(
            BoundsService.lattice_for(exp), BoundsService.frame_for(exp),
            BoundsService.region_for(exp))
        if total != direct:
            logger.error(f"✗ Determinant partition {total} ≠ direct count {direct}")
        return total, direct
