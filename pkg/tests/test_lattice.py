from fractions import Fraction

import pytest

from app.bounds import traceless_partial_dual
from app.lattice import (
    SUPPORTED_DISCRIMINANTS,
    InvalidDivisorError,
    LatticeService,
    LevelNotCoprimeError,
    NotInLatticeError,
    NotSquarefreeError,
    OrderService,
    UnsupportedDiscriminantError,
)


@pytest.mark.parametrize("N", [1, 2, 3, 6, 10])
def test_split_eichler_order_has_reduced_discriminant_N(N):
    R = OrderService.build_order(1, N)
    assert LatticeService.is_order(R)
    assert LatticeService.reduced_discriminant(R) == N
    assert OrderService.verify_eichler(R)


@pytest.mark.parametrize("d_B", [d for d in SUPPORTED_DISCRIMINANTS if d > 1])
def test_builtin_maximal_orders(d_B):
    R = OrderService.builtin_maximal_order(d_B)
    assert LatticeService.is_order(R)
    assert LatticeService.reduced_discriminant(R) == d_B


@pytest.mark.parametrize("d_B, N", [(2, 3), (3, 2)])
def test_definite_eichler_orders(d_B, N):
    R = OrderService.build_order(d_B, N)
    assert OrderService.verify_eichler(R)
    assert LatticeService.reduced_discriminant(R) == d_B * N
    assert LatticeService.contains_lattice(OrderService.builtin_maximal_order(d_B), R)


def test_order_errors():
    with pytest.raises(NotSquarefreeError):
        OrderService.build_order(1, 4)
    with pytest.raises(UnsupportedDiscriminantError):
        OrderService.builtin_maximal_order(17)
    with pytest.raises(LevelNotCoprimeError):
        OrderService.eichler_order(OrderService.builtin_maximal_order(2), 2)


def test_partial_dual_sits_between_order_and_dual(split_order):
    R = OrderService.build_order(1, 6)
    R2 = OrderService.partial_dual(R, 2)
    assert LatticeService.contains_lattice(R2, R)
    assert LatticeService.contains_lattice(LatticeService.dual_lattice(R), R2)
    assert LatticeService.index(R, R2) == 4
    assert OrderService.partial_dual(split_order, 1) == split_order


def test_partial_dual_needs_a_divisor():
    with pytest.raises(InvalidDivisorError):
        OrderService.partial_dual(OrderService.build_order(1, 6), 5)


def test_split_traceless_gram():
    """R⁰ of M₂(Z) is spanned by diag(1,−1), E12, E21: Gram diag(−2) ⊕ [[0,−1],[−1,0]]."""
    invariants = LatticeService.gram_invariants(traceless_partial_dual(1, 1, 1))
    assert invariants.elementary_divisors == (1, 1, 2)
    assert invariants.discriminant == 2


def test_split_level_two_dual_traceless_gram():
    invariants = LatticeService.gram_invariants(traceless_partial_dual(1, 2, 2))
    assert invariants.elementary_divisors == (Fraction(1, 2), Fraction(1, 2), 2)


@pytest.mark.parametrize("d_B, N, ell", [
    (1, 1, 1), (1, 2, 1), (1, 2, 2), (1, 3, 3), (1, 5, 5), (1, 6, 1), (1, 6, 2), (1, 6, 3),
    (1, 6, 6), (1, 15, 5), (2, 1, 1), (2, 1, 2), (3, 1, 3), (5, 1, 1), (7, 1, 7), (2, 3, 6),
])
def test_elementary_divisors_match_the_case_table(d_B, N, ell):
    invariants = LatticeService.gram_invariants(traceless_partial_dual(d_B, N, ell))
    assert invariants.elementary_divisors == OrderService.expected_elementary_divisors(d_B, N, ell)


def test_expected_elementary_divisors_examples():
    assert OrderService.expected_elementary_divisors(1, 1, 1) == (1, 1, 2)
    assert OrderService.expected_elementary_divisors(1, 6, 2) == (Fraction(1, 2), Fraction(3, 2), 6)
    with pytest.raises(InvalidDivisorError):
        OrderService.expected_elementary_divisors(1, 6, 4)


def test_dual_invariants(hurwitz_order):
    L = LatticeService.traceless_sublattice(hurwitz_order)
    dual = LatticeService.dual_lattice(L)
    assert LatticeService.gram_invariants(dual) == LatticeService.gram_invariants(L).dual()


def test_traceless_sublattice(split_order):
    R0 = LatticeService.traceless_sublattice(split_order)
    assert R0.rank == 3
    assert all(q.trace() == 0 for q in R0.basis)
    with pytest.raises(NotInLatticeError):
        LatticeService.coordinates(R0, split_order.algebra.one())


def test_scale_and_index(hurwitz_order):
    assert LatticeService.index(LatticeService.scale(hurwitz_order, 2), hurwitz_order) == 16
    assert LatticeService.intersect(hurwitz_order, LatticeService.scale(hurwitz_order, 3)) == \
        LatticeService.scale(hurwitz_order, 3)


def test_membership(hurwitz_order):
    algebra = hurwitz_order.algebra
    half = algebra.element(*(Fraction(1, 2),) * 4)
    assert LatticeService.contains(hurwitz_order, half)
    assert not LatticeService.contains(hurwitz_order, algebra.element(Fraction(1, 2)))


def test_json_round_trip(hurwitz_order):
    assert LatticeService.from_json(LatticeService.to_json(hurwitz_order)) == hurwitz_order


def test_smith_normal_form():
    assert LatticeService.smith_normal_form([[2, 4], [6, 8]]) == (2, 4)
