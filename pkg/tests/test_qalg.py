from fractions import Fraction

import pytest

from app.qalg import (
    DEFINITE_ALGEBRAS,
    AlgebraMismatchError,
    AlgebraSpec,
    InvalidPlaceError,
    NonInvertibleElementError,
    QuaternionService,
    ZeroStructureConstantError,
)


@pytest.mark.parametrize("d_B", sorted(DEFINITE_ALGEBRAS))
def test_builtin_definite_algebras_have_their_discriminant(d_B):
    algebra = QuaternionService.algebra_from_discriminant(d_B)
    assert algebra.is_definite
    assert algebra.d_B == d_B


def test_split_algebra():
    algebra = QuaternionService.split_algebra()
    assert algebra.d_B == 1
    assert algebra.is_split
    assert not algebra.is_definite


def test_hamilton_quaternions_ramify_at_two_and_infinity():
    assert QuaternionService.ramified_primes(-1, -1) == [2]
    assert QuaternionService.hilbert_symbol(-1, -1, "inf") == -1
    assert QuaternionService.hilbert_symbol(-1, -1, 3) == 1


@pytest.mark.parametrize("a, b", [(-1, -3), (2, 5), (-2, 3), (3, 5), (-1, 7), (6, -10), ("1/2", 3)])
def test_hilbert_reciprocity(a, b):
    """The number of ramified places, infinity included, is even."""
    finite = len(QuaternionService.ramified_primes(a, b))
    infinite = QuaternionService.hilbert_symbol(a, b, "inf") == -1
    assert (finite + infinite) % 2 == 0


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_symbol_matches_brute_force_solvability(p):
    values = [-1, 2, -3, 5, -6, 10]
    for a in values:
        for b in values:
            assert QuaternionService.hilbert_symbol(a, b, p) == QuaternionService.local_solvability(a, b, p)


def test_invalid_place():
    with pytest.raises(InvalidPlaceError):
        QuaternionService.hilbert_symbol(2, 3, 4)


def test_zero_structure_constant_rejected():
    with pytest.raises(ZeroStructureConstantError):
        AlgebraSpec(a=0, b=1)


def test_norm_trace_and_trace_form():
    algebra = QuaternionService.algebra_from_discriminant(3)
    q = algebra.element(1, 2, Fraction(1, 2), -1)
    # w² − a x² − b y² + ab z² with (a, b) = (−1, −3)
    assert q.norm() == 1 + 4 + Fraction(3, 4) + 3
    assert q.trace() == 2
    assert QuaternionService.bilinear(q, q) == 2 * q.norm()
    assert q * q.conj() == algebra.one() * q.norm()


def test_inverse():
    algebra = QuaternionService.algebra_from_discriminant(2)
    q = algebra.element(1, 1, 1, 0)
    assert q * q.inverse() == algebra.one()


def test_zero_norm_element_is_not_invertible():
    split = QuaternionService.split_algebra()
    with pytest.raises(NonInvertibleElementError):
        split.element(1, 1).inverse()


def test_mixing_algebras_is_refused():
    p = QuaternionService.algebra_from_discriminant(2).one()
    q = QuaternionService.algebra_from_discriminant(3).one()
    with pytest.raises(AlgebraMismatchError):
        p * q


def test_split_isomorphism_is_multiplicative():
    split = QuaternionService.split_algebra()
    p = split.element(1, 2, -1, 3)
    q = split.element(0, Fraction(1, 2), 2, -1)
    (a, b), (c, d) = QuaternionService.to_matrix(p)
    (e, f), (g, h) = QuaternionService.to_matrix(q)
    product = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
    assert QuaternionService.to_matrix(p * q) == product
    assert a * d - b * c == p.norm()
    assert QuaternionService.from_matrix(QuaternionService.to_matrix(p)) == p


def test_from_matrix_accepts_rational_strings():
    q = QuaternionService.from_matrix([["1/2", 0], [0, "1/2"]])
    assert q == QuaternionService.split_algebra().element(Fraction(1, 2))


def test_commutator_is_traceless():
    algebra = QuaternionService.algebra_from_discriminant(5)
    p = algebra.element(1, 2, 0, 1)
    q = algebra.element(0, 1, 1, 3)
    assert QuaternionService.commutator(p, q).trace() == 0
