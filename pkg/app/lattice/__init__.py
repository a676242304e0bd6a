"""
Lattice module.

Exact Z-lattices in quaternion algebras: canonical bases, duals, partial
duals, traceless sublattices, Gram invariants and Eichler orders.
"""

from .schemas import Lattice, GramInvariants
from .services import LatticeService, rational_gcd, rational_sqrt
from .orders import OrderService, MAXIMAL_ORDER_BASES, SUPPORTED_DISCRIMINANTS, is_squarefree
from .exceptions import (
    LatticeException,
    NotSquarefreeError,
    UnsupportedDiscriminantError,
    LevelNotCoprimeError,
    EichlerSearchExhaustedError,
    InvalidDivisorError,
    DegenerateGramError,
    SingularMatrixError,
    RankMismatchError,
    NotInLatticeError,
)

__all__ = [
    "Lattice",
    "GramInvariants",
    "LatticeService",
    "OrderService",
    "MAXIMAL_ORDER_BASES",
    "SUPPORTED_DISCRIMINANTS",
    "is_squarefree",
    "rational_gcd",
    "rational_sqrt",
    "LatticeException",
    "NotSquarefreeError",
    "UnsupportedDiscriminantError",
    "LevelNotCoprimeError",
    "EichlerSearchExhaustedError",
    "InvalidDivisorError",
    "DegenerateGramError",
    "SingularMatrixError",
    "RankMismatchError",
    "NotInLatticeError",
]
