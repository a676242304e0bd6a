"""
Custom exceptions for the theta module.
"""
from app.core.exceptions import EXIT_CHECK_FAILED, BudgetExceededError, LabException


class ThetaException(LabException):
    """Base exception for all theta errors."""
    pass


class InvalidFamilyError(ThetaException):
    """Raised when a kernel family does not match the algebra or its weight."""

    def __init__(self, family, reason: str):
        self.family = family
        self.reason = reason
        super().__init__(f"Theta family '{family}': {reason}")


class InvalidTransformationError(ThetaException):
    """Raised when a matrix is not in Γ₀(M)."""

    def __init__(self, gamma, M):
        self.gamma = gamma
        self.M = M
        super().__init__(f"{gamma} is not an element of Γ₀({M})")


class InvalidFactorizationError(ThetaException):
    """Raised when d_B, N are not squarefree and coprime."""

    def __init__(self, d_B, N):
        self.d_B = d_B
        self.N = N
        super().__init__(f"d_B={d_B}, N={N} must be squarefree and coprime")


class InvalidNewformDataError(ThetaException):
    """Raised when newform coefficient data is malformed."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Invalid newform data: {reason}")


class TruncationBudgetExceededError(BudgetExceededError):
    """Raised when a theta lattice sum needs more points than allowed."""

    def __init__(self, needed, budget):
        super().__init__("theta truncation", needed, budget)


class TailBudgetExceededError(BudgetExceededError):
    """Raised when a q-expansion tail bound is above the target accuracy."""

    def __init__(self, tail, accuracy):
        self.tail = tail
        self.accuracy = accuracy
        super().__init__("q-expansion tail", tail, accuracy)


class NonConvergentIntegrandError(ThetaException):
    """Raised when an inner product quadrature does not settle."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, estimate, error):
        self.estimate = estimate
        self.error = error
        super().__init__(f"Quadrature did not converge: estimate {estimate}, error {error:g}")


class UnknownSchemeError(ThetaException):
    """Raised when a quadrature scheme name is not recognised."""

    def __init__(self, scheme):
        self.scheme = scheme
        super().__init__(f"Unknown quadrature scheme '{scheme}' (expected 'gauss' or 'adaptive')")


class DegenerateLiftConstantError(ThetaException):
    """Raised when the theta-lift ratio at the first point snaps to zero."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, ratio, z):
        self.ratio = ratio
        self.z = z
        super().__init__(f"Theta-lift ratio {ratio:.3g} at z={z} gives no usable constant")
