import numpy as np
import pytest

from app.archgeom import ArchGeomService, Region
from app.core.exceptions import BudgetExceededError
from app.core.settings import settings
from app.enumeration import (
    EnumerationService,
    Gauge,
    NotPositiveDefiniteError,
    QuadForm,
    RankTwoRequiredError,
    ReductionDidNotConvergeError,
    UnboundedBodyError,
    lll_reduce,
)


def test_euclidean_ball_counts():
    assert len(EnumerationService.enumerate_ellipsoid(QuadForm.euclidean(3), 2)) == 19
    assert len(EnumerationService.enumerate_ellipsoid(QuadForm.euclidean(4), 1)) == 9


def test_negative_bound_is_empty():
    points = EnumerationService.enumerate_ellipsoid(QuadForm.euclidean(2), -1)
    assert points.shape == (0, 2)


@pytest.mark.parametrize("gram, bound", [
    ([[2, 1], [1, 3]], 10.0),
    ([[5, 2, 1], [2, 4, 1], [1, 1, 3]], 12.5),
    ([[1, 0.9, 0, 0], [0.9, 1, 0, 0], [0, 0, 2, 1], [0, 0, 1, 2]], 4.0),
])
def test_enumeration_matches_brute_force(gram, bound):
    fast = EnumerationService.enumerate_ellipsoid(np.array(gram), bound)
    slow = EnumerationService.brute_force_ellipsoid(np.array(gram), bound)
    assert np.array_equal(fast, slow)


def test_indefinite_form_is_rejected():
    with pytest.raises(NotPositiveDefiniteError):
        QuadForm(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_degenerate_gauge_is_rejected():
    with pytest.raises(UnboundedBodyError):
        Gauge((np.array([[1.0, 0.0], [0.0, 0.0]]),))


def test_budget_is_enforced(monkeypatch):
    monkeypatch.setattr(settings, "ENUMERATION_BUDGET", 1000)
    with pytest.raises(BudgetExceededError):
        EnumerationService.enumerate_ellipsoid(QuadForm.euclidean(4), 100)


def test_successive_minima_of_diagonal_form():
    report = EnumerationService.successive_minima(QuadForm(np.diag([1.0, 4.0, 9.0])))
    assert report.minima == pytest.approx([1.0, 2.0, 3.0])
    assert len(report.witnesses) == 3


def test_lll_basis_is_unimodular():
    gram = np.array([[1.0, 7.0], [7.0, 50.0]])
    H = lll_reduce(gram)
    assert abs(round(np.linalg.det(H))) == 1
    reduced = H @ gram @ H.T
    assert reduced[0, 0] <= gram[0, 0]


def test_reduced_basis_constant_is_at_least_one():
    report = EnumerationService.reduced_basis(QuadForm(np.array([[2.0, 1.0], [1.0, 2.0]])))
    assert report.constant >= 1.0 - 1e-9
    assert report.minima == pytest.approx([np.sqrt(2.0), np.sqrt(2.0)])


def test_count_law_within_band():
    report = EnumerationService.count_law_check(QuadForm(np.diag([1.0, 2.0, 5.0])), T=3.0)
    assert report.within_band
    assert report.count > 1


def test_ball_count_2d():
    report = EnumerationService.ball_count_2d([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 1.0)
    assert report.count == 5
    assert report.bound == pytest.approx(3.0)
    assert report.count <= 2 * report.bound


def test_ball_count_needs_rank_two():
    with pytest.raises(RankTwoRequiredError):
        EnumerationService.ball_count_2d([[1.0, 0.0], [2.0, 0.0]], [0.0, 0.0], 1.0)


def test_region_count_matches_brute_force(split_order):
    frame = ArchGeomService.identity_frame("split")
    region = Region(shape="Omega", delta=1.0, T=1.5)
    points = EnumerationService.region_points(split_order, frame, region)
    assert np.abs(points).max() <= 3
    assert len(points) == EnumerationService.brute_force_count(split_order, frame, region, box=3)


def test_hurwitz_units_and_norm_two_elements(hurwitz_order):
    """The Hurwitz order has 24 units and 24 elements of norm 2."""
    frame = ArchGeomService.identity_frame("definite")
    assert EnumerationService.count_region(hurwitz_order, frame, Region(T=1.0)) == 25
    assert EnumerationService.count_region_star(hurwitz_order, frame, Region(T=1.0)) == 24
    assert EnumerationService.count_region(hurwitz_order, frame, Region(T=1.5)) == 49


def test_lll_gives_up_after_its_iteration_cap():
    with pytest.raises(ReductionDidNotConvergeError):
        lll_reduce(np.eye(3), max_iter=1)


def test_within_gauge_keeps_the_closed_body():
    gauge = Gauge.from_quadform(QuadForm.euclidean(2))
    mask = EnumerationService.within_gauge(gauge, 1.0, [[1, 0], [1, 1], [0, 0], [0, -1]])
    assert mask.tolist() == [True, False, True, True]
    assert EnumerationService.within_gauge(gauge, 1.0, np.zeros((0, 2))).shape == (0,)
