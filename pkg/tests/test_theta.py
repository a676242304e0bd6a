from fractions import Fraction
from math import pi, sqrt

import mpmath
import numpy as np
import pytest

from app.bounds import MalformedDeterminantError
from app.core.settings import settings
from app.theta import (
    DegenerateLiftConstantError,
    InvalidFactorizationError,
    InvalidFamilyError,
    InvalidNewformDataError,
    InvalidTransformationError,
    NewformData,
    NewformService,
    PeterssonService,
    TailBudgetExceededError,
    ThetaService,
    ThetaSpec,
    TruncationBudgetExceededError,
    UnknownSchemeError,
    kernel_shape,
    zonal_polynomial,
)


def ones(s):
    return np.ones(np.shape(s), dtype=complex)


def test_maass_kernel_at_i_is_a_fourth_power_of_jacobi_theta():
    """At z = s = i the level-1 kernel is (Σ e^{−πm²})⁴."""
    expected = float(mpmath.jtheta(3, 0, mpmath.exp(-mpmath.pi)) ** 4)
    value = ThetaService.theta_eval(ThetaSpec(accuracy=1e-12), 1j)
    assert value.real == pytest.approx(expected, rel=1e-10)
    assert abs(value.imag) < 1e-12
    assert expected == pytest.approx(1.3932039297, rel=1e-9)


@pytest.mark.parametrize("family, k, m, kappa", [
    ("maass", 0, 0, 0), ("maass", 4, 0, 4), ("indef_hol", 12, 0, 12),
    ("def_sph", 0, 2, 6), ("def_hol", 2, 0, 4),
])
def test_weights(family, k, m, kappa):
    assert kernel_shape(family, k, m).kappa == kappa


@pytest.mark.parametrize("kwargs", [
    dict(family="def_sph"),
    dict(family="maass", d_B=2),
    dict(family="maass", k=3),
    dict(family="def_hol", d_B=2, k=0),
    dict(family="maass", N=2, ell=3),
    dict(family="maass", y=-1.0),
])
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidFamilyError):
        ThetaSpec(**kwargs)


def test_indef_hol_below_weight_six_uses_the_maass_kernel():
    assert ThetaSpec(family="indef_hol", k=4).kernel == "maass"
    assert ThetaSpec(family="indef_hol", k=12).kernel == "indef_hol"


def test_x_periodicity():
    spec = ThetaSpec(N=2, ell=2)
    report = ThetaService.x_periodicity_check(spec, complex(0.3, 0.9))
    assert report.period == 2
    assert report.deviation < 1e-8


def test_parseval():
    report = ThetaService.parseval_check(ThetaSpec(), 1.0)
    assert report.relative_error < 1e-8


def test_fourier_expansion_reproduces_the_kernel():
    spec = ThetaSpec()
    series = ThetaService.series(spec, 1.0)
    keys, coeffs = series.coefficients(1.0)
    x = 0.3
    value = np.sum(coeffs * np.exp(2j * pi * keys / series.det_scale * x))
    assert value == pytest.approx(ThetaService.theta_eval(spec, complex(x, 1.0)), abs=1e-9)
    c1 = ThetaService.fourier_coeffs(spec, 1, 1.0)
    assert c1 == pytest.approx(coeffs[keys == series.det_scale].sum())
    assert ThetaService.fourier_coeffs(spec, 100, 1.0) == 0j


def test_fourier_coefficients_need_inverse_ell_integers():
    with pytest.raises(MalformedDeterminantError):
        ThetaService.fourier_coeffs(ThetaSpec(), "1/3", 1.0)


def test_truncation_budget(monkeypatch):
    monkeypatch.setattr(settings, "THETA_MAX_POINTS", 1000)
    with pytest.raises(TruncationBudgetExceededError):
        ThetaService.theta_eval(ThetaSpec(N=3, accuracy=1e-9), complex(0.1, 0.05))


@pytest.mark.parametrize("family, k, m", [
    ("maass", 0, 0), ("maass", 4, 0), ("indef_hol", 12, 0), ("def_sph", 0, 2), ("def_hol", 2, 0),
])
def test_test_functions_solve_the_weight_equation(family, k, m):
    report = ThetaService.pde_check(family, k, m)
    assert report.passed, report.ratios


def test_legendre_bound():
    assert ThetaService.bernstein_check(20, 501).passed


def test_zonal_polynomial_low_degrees():
    abs_X2 = np.array([0.0, 1.0, 2.5])
    u = np.array([0.0, 0.5, 1.0])
    assert np.allclose(zonal_polynomial(0, abs_X2, u), 1.0)
    assert np.allclose(zonal_polynomial(1, abs_X2, u), abs_X2 - u)


@pytest.mark.parametrize("d_B, N, coefficient", [
    (1, 1, Fraction(1, 3)), (1, 2, Fraction(1)), (2, 1, Fraction(1, 3)),
    (1, 6, Fraction(4)), (3, 1, Fraction(2, 3)), (2, 3, Fraction(4, 3)),
])
def test_volume(d_B, N, coefficient):
    assert ThetaService.volume_coefficient(d_B, N) == coefficient
    assert ThetaService.volume(d_B, N) == pytest.approx(float(coefficient) * pi)


@pytest.mark.parametrize("d_B, N", [(2, 2), (1, 4)])
def test_volume_needs_a_valid_factorization(d_B, N):
    with pytest.raises(InvalidFactorizationError):
        ThetaService.volume_coefficient(d_B, N)


@pytest.mark.parametrize("M, count", [(1, 1), (2, 3), (6, 12)])
def test_coset_representatives(M, count):
    reps = ThetaService.coset_representatives(M)
    assert len(reps) == count
    assert all(a * d - b * c == 1 for (a, b), (c, d) in reps)


@pytest.mark.parametrize("spec, ell", [
    (ThetaSpec(N=2), 2),
    (ThetaSpec(family="def_sph", d_B=2, m=1), 2),
    (ThetaSpec(family="def_hol", d_B=2, k=2), 2),
])
def test_atkin_lehner_transform(spec, ell):
    report = ThetaService.al_transform_check(spec, ell)
    assert report.passed, report.deviation
    if spec.d_B == 2:
        assert report.factor == pytest.approx(-0.5)


def test_gamma0_invariance_level_two():
    assert ThetaService.gamma0_modularity_check(ThetaSpec(N=2), ((1, 0), (2, 1))).passed


def test_gamma0_needs_a_level_matrix():
    with pytest.raises(InvalidTransformationError):
        ThetaService.gamma0_modularity_check(ThetaSpec(N=2), ((1, 0), (1, 1)))


@pytest.mark.slow
def test_gamma0_invariance_partial_dual():
    spec = ThetaSpec(N=6, ell=3)
    assert ThetaService.gamma0_modularity_check(spec, ((1, 0), (6, 1))).passed


def test_delta_coefficients(delta):
    assert delta.coeffs[:10] == (1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920)
    assert delta.multiplicativity_violations() == []
    assert delta.hecke_violations() == []


def test_delta_at_i(delta):
    assert abs(NewformService.newform_eval(delta, 1j)) == pytest.approx(0.0017853698, rel=1e-7)


def test_short_expansion_cannot_reach_low_points():
    with pytest.raises(TailBudgetExceededError):
        NewformService.as_function(NewformService.delta_qexp(10), 0.05)


def test_newform_data_validation(tmp_path):
    with pytest.raises(InvalidNewformDataError):
        NewformData(k=12, coeffs=[2, 3])
    with pytest.raises(InvalidNewformDataError):
        NewformData(k=12, coeffs=["1", "x"])
    path = tmp_path / "delta.json"
    NewformService.delta_qexp(20).dump(path)
    assert NewformData.load(path).coeffs == NewformService.delta_qexp(20).coeffs


def test_volume_of_the_fundamental_domain():
    assert PeterssonService.petersson_inner(ones, ones).real == pytest.approx(pi / 3, rel=1e-8)
    assert PeterssonService.petersson_inner(ones, ones, M=2).real == pytest.approx(pi, rel=1e-8)
    assert PeterssonService.petersson_inner(ones, ones, normalized=True).real == pytest.approx(1.0, rel=1e-8)


def test_petersson_norm_of_delta(delta):
    f = NewformService.as_function(delta, PeterssonService.lowest_height(1))
    norm = PeterssonService.petersson_inner(f, f).real
    assert norm == pytest.approx(1.03536205e-6, rel=1e-4)
    normalized = PeterssonService.petersson_inner(f, f, normalized=True).real
    assert normalized == pytest.approx(norm / (pi / 3))


def test_tile_cover_bounds_the_norm(delta):
    f = NewformService.as_function(delta, sqrt(3) / 2 * 0.99)
    norm = PeterssonService.petersson_inner(f, f).real
    assert PeterssonService.tile_cover_integral(f, 1) >= norm * (1 - 1e-6)


def test_quadrature_scheme_is_validated():
    with pytest.raises(UnknownSchemeError):
        PeterssonService.petersson_inner(ones, ones, scheme="simpson")


def test_lift_refuses_a_vanishing_constant(delta, monkeypatch):
    monkeypatch.setattr(ThetaService, "as_function",
                        lambda spec, y_min: lambda s: np.zeros(np.shape(s), dtype=complex))
    with pytest.raises(DegenerateLiftConstantError):
        PeterssonService.theta_lift_identity_check(delta, points=[1j])


def test_lift_needs_level_one(delta):
    form = NewformData(k=12, N=2, coeffs=delta.coeffs)
    with pytest.raises(InvalidFamilyError):
        PeterssonService.theta_lift_identity_check(form)


@pytest.mark.slow
def test_theta_lift_identity(delta):
    report = PeterssonService.theta_lift_identity_check(delta, points=[1j, 2j])
    assert report.passed, report.max_relative_error
    assert report.constant == "2"
