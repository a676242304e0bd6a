from math import sqrt

import numpy as np
import pytest

from app.archgeom import ArchGeomService
from app.bounds import (
    COMMUTATOR_MODES,
    BoundsService,
    ChecksService,
    CountExperiment,
    DegenerateBinaryFormError,
    InvalidExperimentError,
    IsotropicLatticeError,
    MajorantViolationError,
    MalformedDeterminantError,
    SplitPsiRefusedError,
    SweepGrid,
    run_job,
    sample_omega,
    traceless_partial_dual,
)
from app.core.rationals import format_rational
from app.core.settings import settings
from app.qalg import QuaternionService


def test_type1_default_experiment():
    """R⁰ of M₂(Z) at z = i has ten nonzero points with P ≤ 1 and u ≤ 1."""
    report = BoundsService.type1_report(CountExperiment())
    assert report.kind == "type1"
    assert report.observed == 10
    assert report.bound == pytest.approx(6.0)
    assert report.ratio == pytest.approx(10 / 6)
    assert report.H == pytest.approx(1.0)
    assert report.first_minimum == pytest.approx(sqrt(0.5))
    assert report.threshold == pytest.approx(1.0)
    assert report.first_minimum >= settings.MINIMUM_CONSTANT * report.threshold


def test_type2_count_and_bound():
    exp = CountExperiment(T=1.5, n="1")
    report = BoundsService.type2_report(exp)
    assert report.observed == 2
    assert report.bound == pytest.approx(4.75)
    assert report.n == "1"


def test_type2_count_outside_the_determinant_range():
    assert BoundsService.type2_count(CountExperiment(T=1.0, n="5")) == 0


def test_split_square_flag_adds_allowance():
    plain = CountExperiment(T=1.5, n="1")
    square = CountExperiment(T=1.5, n="-1")
    assert not BoundsService.typeII_split_square_flag(plain)
    assert BoundsService.typeII_split_square_flag(square)
    assert BoundsService.type2_bound(square) == pytest.approx(BoundsService.type2_bound(plain) + 1.5)


def test_definite_psi_and_refined_bounds():
    report = BoundsService.type1_report(CountExperiment(d_B=2, shape="Psi", T=1.5))
    assert report.kind == "type1_psi"
    assert report.H is None
    refined = BoundsService.type2_report(CountExperiment(d_B=2, T=2.0, n="2"), refined=True)
    assert refined.kind == "type2_refined"
    assert refined.ratio <= settings.CALIBRATION_CONSTANT


def test_psi_is_refused_for_split_algebras():
    with pytest.raises(SplitPsiRefusedError):
        BoundsService.type1_report(CountExperiment(shape="Psi"))


@pytest.mark.parametrize("kwargs", [dict(delta=0), dict(N=4), dict(N=6, ell=4), dict(d_B=17)])
def test_invalid_experiments(kwargs):
    with pytest.raises(InvalidExperimentError):
        CountExperiment(**kwargs)


def test_determinant_must_lie_in_inverse_ell_integers():
    with pytest.raises(MalformedDeterminantError):
        CountExperiment(ell=1, n="1/2")
    assert CountExperiment(N=2, ell=2, n="1/2").n * 2 == 1
    with pytest.raises(MalformedDeterminantError):
        BoundsService.type2_count(CountExperiment())


@pytest.mark.parametrize("exp", [
    CountExperiment(T=1.5),
    CountExperiment(N=6, ell=2, x=0.2, y=0.5, T=2.0),
    CountExperiment(d_B=3, T=2.0, rotation_seed=4),
])
def test_determinant_partition_adds_up(exp):
    total, direct = ChecksService.partition_check(exp)
    assert total == direct


@pytest.mark.parametrize("exp", [
    CountExperiment(T=1.5, delta=0.5),
    CountExperiment(),
    CountExperiment(T=2.0, delta=0.25),
    CountExperiment(N=2, ell=2, x=0.5, y=1.0, T=2.0, delta=0.5),
])
def test_fibered_split_count_agrees(exp):
    """Boundary points (P = T² or u = δT²) are decided the same way as the direct count."""
    report = BoundsService.type1_split_fibered(exp)
    assert report.agrees
    assert report.fibered_count == report.direct_count
    assert report.fibers >= 1


def test_fibered_count_of_the_default_experiment():
    assert BoundsService.type1_split_fibered(CountExperiment()).fibered_count == 10


def test_dyadic_reduction_covers_the_fiber():
    exp = CountExperiment(delta=0.05, T=3.0, n="1")
    assert BoundsService.dyadic_pieces(0.05) == [None, 1.0]
    report = BoundsService.dyadic_typeII_reduction(exp)
    assert report.covered
    assert report.sum_pieces >= report.direct_count


@pytest.mark.parametrize("d_B, N, ell", [(1, 1, 1), (1, 2, 2), (1, 6, 3), (2, 1, 2), (3, 1, 1)])
@pytest.mark.parametrize("mode", COMMUTATOR_MODES)
def test_commutator_congruences(d_B, N, ell, mode):
    assert ChecksService.commutator_checks(d_B, N, ell, mode).passed


def test_unknown_commutator_mode():
    with pytest.raises(InvalidExperimentError):
        ChecksService.commutator_lattices(1, 1, 1, "bogus")


@pytest.mark.parametrize("kind", ["split", "definite"])
def test_commutator_archimedean_size(kind):
    report = ChecksService.commutator_arch_ratio(kind, delta=0.1, T=2.0, samples=500)
    assert report.samples == 500
    assert report.within_band


def test_sample_omega_stays_in_region():
    abcd = sample_omega(0.25, 2.0, 300, seed=3)
    P, u, _, _ = ArchGeomService.forms(abcd, "split")
    assert len(abcd) == 300
    assert np.all(P <= 4.0 + 1e-12)
    assert np.all(u <= 1.0 + 1e-12)


@pytest.mark.parametrize("d_B", [1, 2, 5])
def test_norm_decomposition(d_B):
    algebra = QuaternionService.algebra_from_discriminant(d_B)
    assert ChecksService.norm_decomposition_sweep(algebra, count=100) == 0


def test_splitting_inequalities():
    report = ChecksService.splitting_inequality_checks(CountExperiment(T=1.0))
    assert report.inclusion_holds
    assert report.fiber_bound_holds
    assert report.pairs >= report.points


def test_ternary_invariants_definite():
    report = ChecksService.prop8_checks(traceless_partial_dual(2, 1, 1))
    assert report.lambda1_ok
    assert len(report.minima) == 3


def test_isotropic_lattice_is_refused():
    with pytest.raises(IsotropicLatticeError):
        ChecksService.prop8_checks(traceless_partial_dual(1, 1, 1))


def test_binary_representations():
    assert ChecksService.binary_rep_count([[1, 0], [0, 1]], [[1, 0], [0, 1]], 5, 3.0) == 8
    reports = ChecksService.binary_rep_sweep([[1, 0], [0, 1]], [[1, 0], [0, 1]], [1, 5], [3.0])
    assert [r.count for r in reports] == [4, 8]
    with pytest.raises(DegenerateBinaryFormError):
        ChecksService.binary_rep_count([[1, 1], [1, 1]], np.eye(2), 1, 2.0)
    with pytest.raises(MajorantViolationError):
        ChecksService.binary_rep_count([[2, 0], [0, 1]], np.eye(2), 1, 2.0)


def test_expand_grid():
    jobs = BoundsService.expand_grid(SweepGrid(N=[1, 2], n=["1"]))
    assert len(jobs) == 6
    assert sorted(kind for kind, _ in jobs) == ["type1"] * 3 + ["type2"] * 3


def test_sweep_is_sorted_and_deterministic():
    grid = SweepGrid(N=[1, 2], T=[1.0, 1.5], n=["1"])
    first = BoundsService.sweep(grid, workers=1)
    second = BoundsService.sweep(grid, workers=1)
    assert [r.model_dump(exclude={"wall_ms"}) for r in first] == \
        [r.model_dump(exclude={"wall_ms"}) for r in second]
    kinds = [r.kind for r in first]
    assert kinds == sorted(kinds)
    assert set(BoundsService.max_ratios(first)) == {"type1", "type2"}


def test_run_job_round_trips_through_dicts():
    row = run_job(("type1", CountExperiment().model_dump()))
    assert row["observed"] == 10


def test_type2_jobs_default_to_attained_determinants():
    jobs = BoundsService.expand_grid(SweepGrid(N=[2], T=[2.0]))
    for ell in (1, 2):
        expected = {format_rational(n) for n in
                    BoundsService.determinant_partition(CountExperiment(N=2, ell=ell, T=2.0))}
        found = {format_rational(exp.n) for kind, exp in jobs if kind == "type2" and exp.ell == ell}
        assert found
        assert found == expected


def test_level_points_scale_with_the_level():
    jobs = BoundsService.expand_grid(SweepGrid(N=[1, 2], points=[], level_points=[(0.5, 1.0)], n=["1"]))
    frames = {exp.N: (exp.x, exp.y) for _, exp in jobs}
    assert frames[1] == (0.5, 1.0)
    assert frames[2] == (0.5, pytest.approx(1 / sqrt(2)))


def test_expand_grid_by_kind():
    grid = SweepGrid(N=[1, 2], n=["1"])
    assert {kind for kind, _ in BoundsService.expand_grid(grid, kinds=("type1",))} == {"type1"}
    assert {kind for kind, _ in BoundsService.expand_grid(grid, kinds=("type2",))} == {"type2"}


@pytest.mark.slow
def test_reduced_acceptance_grid():
    """Partition identity, bounded ratios and first minima on every grid instance."""
    grid = SweepGrid(d_B=[1, 2], N=[1, 2], delta=[1.0, 0.1], T=[0.5, 1.0, 2.0],
                     points=[(0.0, 1.0)], level_points=[(0.5, 1.0)])
    for kind, exp in BoundsService.expand_grid(grid, kinds=("type1",)):
        total, direct = ChecksService.partition_check(exp)
        assert total == direct, exp
    reports = BoundsService.sweep(grid, workers=1)
    assert {r.kind for r in reports} == {"type1", "type2"}
    for report in reports:
        assert report.ratio <= settings.CALIBRATION_CONSTANT, report
        if report.kind.startswith("type1"):
            assert report.first_minimum >= settings.MINIMUM_CONSTANT * report.threshold, report
