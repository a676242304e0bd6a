"""
Theta module.

The four theta kernels as truncated lattice sums, their Fourier
coefficients and transformation laws, the archimedean PDE, the volume
formula, Δ and other newforms, Petersson inner products and the theta-lift
identity.
"""

from .schemas import (
    ThetaSpec,
    NewformData,
    TransformReport,
    PdeReport,
    BernsteinReport,
    PeriodicityReport,
    ParsevalReport,
    LiftPoint,
    LiftReport,
)
from .kernels import FAMILIES, KernelShape, kernel_shape, test_function, zonal_polynomial
from .services import ThetaService, ThetaSeries, balanced_points, lift_spec, truncation_radius
from .newforms import NewformService
from .petersson import PeterssonService, fundamental_domain_rule
from .exceptions import (
    ThetaException,
    InvalidFamilyError,
    InvalidTransformationError,
    InvalidFactorizationError,
    InvalidNewformDataError,
    TruncationBudgetExceededError,
    TailBudgetExceededError,
    NonConvergentIntegrandError,
    UnknownSchemeError,
    DegenerateLiftConstantError,
)

__all__ = [
    "ThetaSpec",
    "NewformData",
    "TransformReport",
    "PdeReport",
    "BernsteinReport",
    "PeriodicityReport",
    "ParsevalReport",
    "LiftPoint",
    "LiftReport",
    "FAMILIES",
    "KernelShape",
    "kernel_shape",
    "test_function",
    "zonal_polynomial",
    "ThetaService",
    "ThetaSeries",
    "balanced_points",
    "lift_spec",
    "truncation_radius",
    "NewformService",
    "PeterssonService",
    "fundamental_domain_rule",
    "ThetaException",
    "InvalidFamilyError",
    "InvalidTransformationError",
    "InvalidFactorizationError",
    "InvalidNewformDataError",
    "TruncationBudgetExceededError",
    "TailBudgetExceededError",
    "NonConvergentIntegrandError",
    "UnknownSchemeError",
    "DegenerateLiftConstantError",
]
