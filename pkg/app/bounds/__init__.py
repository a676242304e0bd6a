"""
Bounds module.

Type I / Type II lattice point counts against their explicit bounds, and the
structural checks (commutators, norm decomposition, pair counts, ternary
invariants, dyadic reduction) they rest on.
"""

from .schemas import (
    CountExperiment,
    BoundReport,
    FiberedCountReport,
    CommutatorReport,
    ArchRatioReport,
    PairCountReport,
    BinaryRepReport,
    Prop8Report,
    DyadicReport,
    SweepGrid,
)
from .services import BoundsService, exact_norms, norm_gram, partial_dual_order, traceless_partial_dual, run_job
from .checks import ChecksService, COMMUTATOR_MODES, sample_omega
from .exceptions import (
    BoundsException,
    SplitPsiRefusedError,
    MalformedDeterminantError,
    InvalidExperimentError,
    PairCountCapExceededError,
    IsotropicLatticeError,
    DegenerateBinaryFormError,
    MajorantViolationError,
)

__all__ = [
    "CountExperiment",
    "BoundReport",
    "FiberedCountReport",
    "CommutatorReport",
    "ArchRatioReport",
    "PairCountReport",
    "BinaryRepReport",
    "Prop8Report",
    "DyadicReport",
    "SweepGrid",
    "BoundsService",
    "ChecksService",
    "COMMUTATOR_MODES",
    "exact_norms",
    "norm_gram",
    "partial_dual_order",
    "traceless_partial_dual",
    "run_job",
    "sample_omega",
    "BoundsException",
    "SplitPsiRefusedError",
    "MalformedDeterminantError",
    "InvalidExperimentError",
    "PairCountCapExceededError",
    "IsotropicLatticeError",
    "DegenerateBinaryFormError",
    "MajorantViolationError",
]
