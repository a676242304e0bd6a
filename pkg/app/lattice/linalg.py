"""
Exact rational linear algebra on top of sympy.

Matrices are passed around as tuples of tuples of Fraction; sympy is used
for normal forms, inverses and determinants.
"""
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, ZZ
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

from app.core.rationals import to_fraction
from .exceptions import DegenerateGramError, SingularMatrixError

Row = Tuple[Fraction, ...]
Rows = Tuple[Row, ...]


def to_sympy(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return Matrix([[Rational(f.numerator, f.denominator) for f in map(to_fraction, row)]
                   for row in rows])


def from_sympy(m: Matrix) -> Rows:
    return tuple(tuple(to_fraction(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def common_denominator(rows: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for row in rows:
        for entry in row:
            d = lcm(d, to_fraction(entry).denominator)
    return d


def scale_to_integers(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], int]:
    """Return (D·rows as ints, D) with D the least common denominator."""
    d = common_denominator(rows)
    return [[int(to_fraction(e) * d) for e in row] for row in rows], d


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    return to_fraction(to_sympy(rows).det())


def inverse(rows: Sequence[Sequence[Fraction]]) -> Rows:
    m = to_sympy(rows)
    if m.det() == 0:
        raise SingularMatrixError(m.rows)
    return from_sympy(m.inv())


def hnf_rows(rows: Sequence[Sequence[Fraction]]) -> Rows:
    """
    Canonical Z-basis of the lattice spanned by the given rational rows.

    The rows are scaled to integers, placed as columns and put in column
    Hermite normal form (positive pivots); zero columns are dropped.
    """
    ints, d = scale_to_integers(rows)
    if not ints:
        return ()
    width = len(ints[0])
    columns = Matrix(width, len(ints), lambda i, j: ints[j][i])
    h = hermite_normal_form(columns)
    basis = []
    for j in range(h.cols):
        column = tuple(Fraction(int(h[i, j]), d) for i in range(width))
        if any(column):
            basis.append(column)
    return tuple(basis)


def elementary_divisors(rows: Sequence[Sequence[Fraction]]) -> Tuple[Fraction, ...]:
    """
    Elementary divisors of a nonsingular rational matrix, ascending.

    Computed as the invariant factors of D·M over Z divided by D.
    """
    ints, d = scale_to_integers(rows)
    factors = invariant_factors(Matrix(ints), domain=ZZ)
    result = tuple(sorted(Fraction(abs(int(f)), d) for f in factors))
    if any(f == 0 for f in result) or len(result) != len(ints):
        raise DegenerateGramError(len(ints))
    return result


def smith_normal_form(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Elementary divisors d₁ | d₂ | … of an integer matrix (zeros kept)."""
    factors = invariant_factors(Matrix([[int(e) for e in row] for row in rows]), domain=ZZ)
    return tuple(abs(int(f)) for f in factors)


def integer_kernel(weights: Sequence[Fraction]) -> Tuple[Tuple[int, ...], ...]:
    """
    A Z-basis of {c ∈ Zⁿ : Σ cᵢ·weightsᵢ = 0}.

    The weights are appended as the last row below an identity block; the
    column HNF leaves the weights row as (0, …, 0, g), so the first n−1
    columns span the kernel.
    """
    ints, _ = scale_to_integers([weights])
    t = ints[0]
    n = len(t)
    if not any(t):
        return tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n))
    augmented = Matrix(n + 1, n, lambda i, j: (1 if i == j else 0) if i < n else t[j])
    h = hermite_normal_form(augmented)
    kernel = []
    for j in range(h.cols):
        if h[n, j] == 0:
            kernel.append(tuple(int(h[i, j]) for i in range(n)))
    return tuple(kernel)


def solve_coordinates(basis: Rows, vector: Sequence[Fraction]) -> Optional[Row]:
    """
    Coefficients c with Σ cᵢ·basisᵢ = vector, or None if vector is outside
    the rational span.
    """
    m = to_sympy(basis).T
    v = to_sympy([vector]).T
    try:
        solution, params = m.gauss_jordan_solve(v)
    except ValueError:
        return None
    if params.shape[0]:
        raise DegenerateGramError(len(basis))
    return tuple(to_fraction(solution[i, 0]) for i in range(solution.rows))


def pivot_inverse(basis: Rows) -> Tuple[Tuple[int, ...], Rows]:
    """
    Columns S with basis[:, S] invertible, and that inverse.

    Coordinates of a vector v in the span are then v[S]·inverse, which is
    much cheaper than a fresh solve per vector.
    """
    from itertools import combinations
    width = len(basis[0])
    rank = len(basis)
    for cols in combinations(range(width), rank):
        sub = [[row[c] for c in cols] for row in basis]
        if determinant(sub) != 0:
            return cols, inverse(sub)
    raise DegenerateGramError(rank)
