"""
Archimedean kernels of the four theta families.

Each family is a lattice sum y^p Σ c·w(γ)·e(x det γ)·e^{−2πy E(γ)} where the
weight w, the energy E (P or det) and the constants c, p depend on the
family. The same weights at y = 1 give the archimedean test functions Φ.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import pi
from typing import Literal, Tuple

import numpy as np
from numpy.polynomial import legendre

from app.archgeom import ArchGeomService

Family = Literal["maass", "indef_hol", "def_sph", "def_hol"]

FAMILIES: Tuple[str, ...] = ("maass", "indef_hol", "def_sph", "def_hol")


@dataclass(frozen=True)
class KernelShape:
    """Constants of one family: θ(s) = prefactor·y^power·Σ w e(x det) e^{−2πy E}."""

    family: str
    kind: str
    kappa: int
    prefactor: float
    power: float
    energy: Literal["P", "det"]
    degree: int


def kernel_shape(family: str, k: int = 0, m: int = 0) -> KernelShape:
    """
    Family constants, κ included.

    Args:
        family: maass, indef_hol, def_sph or def_hol
        k: weight parameter (maass, indef_hol, def_hol)
        m: Legendre degree (def_sph)

    Returns:
        KernelShape
    """
    if family == "maass":
        return KernelShape(family, "split", k, 1.0, 1 + k / 2, "P", k)
    if family == "indef_hol":
        return KernelShape(family, "split", k, (k - 1) / (4 * pi), k / 2, "det", k)
    if family == "def_sph":
        return KernelShape(family, "definite", 2 * m + 2, 2 * m + 1.0, 1 + m, "det", 2 * m)
    if family == "def_hol":
        return KernelShape(family, "definite", k + 2, k + 1.0, 1 + k / 2, "det", k)
    raise KeyError(family)


@lru_cache(maxsize=64)
def _legendre_power_coefficients(m: int) -> np.ndarray:
    return legendre.leg2poly([0] * m + [1])


def zonal_polynomial(m: int, abs_X2: np.ndarray, u: np.ndarray) -> np.ndarray:
    """
    det^m P_m((|X|² − u)/det) on the definite algebra, as a polynomial.

    Expanded term by term so that the value at γ = 0 is 1 for m = 0 and 0
    otherwise.
    """
    det = abs_X2 + u
    diff = abs_X2 - u
    total = np.zeros_like(np.asarray(det, dtype=float))
    for j, coeff in enumerate(_legendre_power_coefficients(m)):
        if coeff:
            total = total + coeff * diff ** j * det ** (m - j)
    return total


def lattice_weights(family: str, k: int, m: int, u: np.ndarray, X: np.ndarray,
                    det: np.ndarray) -> np.ndarray:
    """w(γ) of the family, zero where the family's sum excludes γ."""
    if family in ("maass", "def_hol"):
        if k == 0:
            return np.ones(np.shape(X), dtype=complex)
        return X.astype(complex) ** k
    if family == "def_sph":
        return zonal_polynomial(m, np.abs(X) ** 2, u).astype(complex)
    positive = det > 0
    out = np.zeros(det.shape, dtype=complex)
    out[positive] = det[positive] ** (k - 1) * np.conj(X[positive]) ** (-k)
    return out


def test_function(family: str, abcd: np.ndarray, k: int = 0, m: int = 0) -> np.ndarray:
    """
    Φ at (..., 4) points: the family's summand at y = 1, x = 0.

    maass X^k e^{−2πP}; indef_hol (k−1)/(4π) det^{k−1} X̄^{−k} e^{−2π det} for
    det > 0 and 0 otherwise; def_sph (2m+1) det^m P_m(·) e^{−2π det};
    def_hol (k+1) X^k e^{−2π det}.
    """
    shape = kernel_shape(family, k, m)
    P, u, X, det = ArchGeomService.forms(abcd, shape.kind)
    energy = P if shape.energy == "P" else det
    w = lattice_weights(family, k, m, u, X, det)
    return shape.prefactor * w * np.exp(-2 * pi * np.where(w != 0, energy, 0.0))
