"""
Quaternion algebra module.

Exact arithmetic in rational quaternion algebras (a, b | Q): elements,
trace form, commutators, the fixed split isomorphism and ramification.
"""

from .schemas import AlgebraSpec, Quat
from .services import QuaternionService, DEFINITE_ALGEBRAS
from .exceptions import (
    QuaternionAlgebraException,
    AlgebraMismatchError,
    ZeroStructureConstantError,
    NonInvertibleElementError,
    InvalidPlaceError,
)

__all__ = [
    "AlgebraSpec",
    "Quat",
    "QuaternionService",
    "DEFINITE_ALGEBRAS",
    "QuaternionAlgebraException",
    "AlgebraMismatchError",
    "ZeroStructureConstantError",
    "NonInvertibleElementError",
    "InvalidPlaceError",
]
