"""
Enumeration module.

Fincke–Pohst enumeration in ellipsoids and in Ω/Ψ bodies, successive
minima, reduced bases and the counting laws of the geometry of numbers.
"""

from .schemas import (
    QuadForm,
    Gauge,
    MinimaReport,
    ReducedBasisReport,
    CountLawReport,
    BallCountReport,
    quadratic_values,
)
from .services import EnumerationService, exact_form_grams
from .reduction import lll_reduce, greedy_improve
from .exceptions import (
    EnumerationException,
    NotPositiveDefiniteError,
    UnboundedBodyError,
    RankTwoRequiredError,
    ReductionDidNotConvergeError,
)

__all__ = [
    "QuadForm",
    "Gauge",
    "MinimaReport",
    "ReducedBasisReport",
    "CountLawReport",
    "BallCountReport",
    "quadratic_values",
    "EnumerationService",
    "exact_form_grams",
    "lll_reduce",
    "greedy_improve",
    "EnumerationException",
    "NotPositiveDefiniteError",
    "UnboundedBodyError",
    "RankTwoRequiredError",
    "ReductionDidNotConvergeError",
]
