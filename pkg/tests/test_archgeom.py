from fractions import Fraction
from math import sqrt

import numpy as np
import pytest

from app.archgeom import (
    ArchGeomService,
    CuspService,
    FrameMismatchError,
    InexactFrameError,
    InvalidCuspDataError,
    InvalidRegionError,
    InvalidUpperHalfPlanePointError,
    Region,
    hamilton_mul,
)
from app.qalg import QuaternionService


def test_hamilton_mul_i_times_j_is_k():
    i = np.array([0.0, 1.0, 0.0, 0.0])
    j = np.array([0.0, 0.0, 1.0, 0.0])
    assert np.allclose(hamilton_mul(i, j), [0.0, 0.0, 0.0, 1.0])
    assert np.allclose(hamilton_mul(j, i), [0.0, 0.0, 0.0, -1.0])


@pytest.mark.parametrize("z", [1j, complex(0.3, 0.7), complex(-2.0, 5.0)])
def test_split_det_form_is_reduced_norm(z):
    split = QuaternionService.split_algebra()
    frame = ArchGeomService.sigma_z(z)
    for coords in [(1, 0, 0, 0), (1, 2, -1, 3), (0, 1, 1, 0), (2, "1/2", 0, -1)]:
        gamma = split.element(*[Fraction(c) for c in coords])
        *_, det = ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), "split")
        assert det == pytest.approx(float(gamma.norm()), abs=1e-9)


@pytest.mark.parametrize("d_B", [2, 3, 5])
def test_definite_det_form_is_reduced_norm(d_B):
    algebra = QuaternionService.algebra_from_discriminant(d_B)
    frame = ArchGeomService.random_rotation(seed=7)
    gamma = algebra.element(1, -2, 1, 3)
    P, u, X, det = ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), "definite")
    assert det == pytest.approx(float(gamma.norm()))
    assert P == pytest.approx(float(gamma.norm()))
    assert abs(X) ** 2 + u == pytest.approx(P)


def test_exact_forms_agree_with_floats_at_rational_point():
    split = QuaternionService.split_algebra()
    frame = ArchGeomService.sigma_z(complex(1 / 3, 2.0), exact=("1/3", 2))
    gamma = split.element(1, 2, -1, 3)
    exact = ArchGeomService.exact_forms(gamma, frame)
    P, u, X, det = ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), "split")
    assert float(exact.P) == pytest.approx(P)
    assert float(exact.u) == pytest.approx(u)
    assert float(exact.abs_X2) == pytest.approx(abs(X) ** 2)
    assert exact.det == gamma.norm()


def test_exact_forms_definite_identity_frame(hurwitz_order):
    frame = ArchGeomService.identity_frame("definite")
    for gamma in hurwitz_order.basis:
        exact = ArchGeomService.exact_forms(gamma, frame)
        assert exact.P == gamma.norm()
        assert float(exact.u) == pytest.approx(ArchGeomService.u(gamma, frame))


def test_rotated_frame_is_not_exact():
    algebra = QuaternionService.algebra_from_discriminant(2)
    with pytest.raises(InexactFrameError):
        ArchGeomService.exact_forms(algebra.one(), ArchGeomService.random_rotation(seed=1))


def test_frame_kind_must_match_algebra():
    split = QuaternionService.split_algebra()
    with pytest.raises(FrameMismatchError):
        ArchGeomService.P(split.one(), ArchGeomService.identity_frame("definite"))


@pytest.mark.parametrize("z", [complex(1.0, 0.0), complex(0.0, -1.0)])
def test_sigma_z_needs_upper_half_plane(z):
    with pytest.raises(InvalidUpperHalfPlanePointError):
        ArchGeomService.sigma_z(z)


@pytest.mark.parametrize("delta, T", [(0.0, 1.0), (1.5, 1.0), (0.5, 0.0)])
def test_region_parameters(delta, T):
    with pytest.raises(InvalidRegionError):
        Region(delta=delta, T=T)


def test_region_membership_on_the_boundary():
    one = QuaternionService.split_algebra().one()
    frame = ArchGeomService.identity_frame("split")
    # the identity has P = 1, u = 0 and |X|² = 1
    assert ArchGeomService.in_region(one, frame, Region(shape="Omega", delta=0.5, T=1.0))
    assert not ArchGeomService.in_region(one, frame, Region(shape="Psi", delta=0.5, T=1.0))
    assert not ArchGeomService.in_region(one, frame, Region(shape="Omega", delta=1.0, T=0.99))


@pytest.mark.parametrize("ell, M", [(1, 6), (2, 6), (3, 6), (6, 6), (5, 10), (2, 2)])
def test_tau_ell_congruences(ell, M):
    (a, b), (c, d) = CuspService.tau_ell(ell, M)
    assert a * d - b * c == 1
    assert (a % ell, b % ell, c % ell, d % ell) == (0, 1 % ell, -1 % ell, 0)
    m = M // ell
    assert (a % m, b % m, c % m, d % m) == (1 % m, 0, 0, 1 % m)


def test_tau_ell_needs_a_divisor():
    with pytest.raises(InvalidCuspDataError):
        CuspService.tau_ell(4, 6)


def test_siegel_tiles():
    tiles = CuspService.siegel_tiles(6)
    assert [t.ell for t in tiles] == [1, 2, 3, 6]
    assert tiles[0].y_min == pytest.approx(sqrt(3) / 12)
    assert tiles[-1].x_range == (0.0, 6.0)


def test_height_at_i_for_level_one():
    assert CuspService.height_H(1j, 1) == pytest.approx(1.0)


def test_reduction_never_lowers_the_height():
    z = complex(0.37, 0.02)
    w = CuspService.reduce_to_AL_max(z, 6)
    assert w.imag >= z.imag
    assert 0.0 <= w.real < 1.0


@pytest.mark.parametrize("N", [1, 2, 6, 15])
def test_al_maximal_points(N):
    for seed in range(5):
        z = CuspService.al_random_point(N, seed)
        assert z.imag >= sqrt(3) / (2 * N) * (1 - 1e-9)
        assert CuspService.lemma61_check(z, N, box=10).passed


def test_lemma61_check_from_arbitrary_point():
    report = CuspService.lemma61_check(complex(0.3, 0.01), 6)
    assert report.passed
    assert report.height >= report.im_bound
