"""
Custom exceptions for the bounds module.

Failures of a numeric check are reported in the check's result; these
exceptions cover requests the harness refuses to run.
"""
from app.core.exceptions import EXIT_CHECK_FAILED, LabException


class BoundsException(LabException):
    """Base exception for all bounds errors."""
    pass


class SplitPsiRefusedError(BoundsException):
    """Raised when a Ψ-shaped Type I bound is requested for the split algebra."""

    def __init__(self):
        super().__init__("The Ψ(δ,T) Type I bound is only stated for non-split algebras")


class MalformedDeterminantError(BoundsException):
    """Raised when a Type II determinant n is missing or not in (1/ℓ)Z."""

    def __init__(self, n, ell):
        self.n = n
        self.ell = ell
        super().__init__(f"Determinant n={n} must be given and lie in (1/{ell})Z")


class InvalidExperimentError(BoundsException):
    """Raised when experiment parameters are inconsistent."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Invalid experiment: {reason}")


class PairCountCapExceededError(BoundsException):
    """Raised when an equal-determinant pair count would exceed the configured cap."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, points, cap):
        self.points = points
        self.cap = cap
        super().__init__(f"{points} points give up to {points ** 2} pairs, above the cap {cap:g}")


class IsotropicLatticeError(BoundsException):
    """Raised when the reduced norm has a nonzero zero on the lattice."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"Lattice is isotropic: q vanishes on nonzero vector {witness}")


class DegenerateBinaryFormError(BoundsException):
    """Raised when a binary form q is degenerate on its lattice."""

    def __init__(self):
        super().__init__("The binary form q is degenerate on the lattice")


class MajorantViolationError(BoundsException):
    """Raised when the majorant Q fails |q| ≤ Q."""

    def __init__(self, excess):
        self.excess = excess
        super().__init__(f"|q| ≤ Q fails: largest generalized eigenvalue magnitude {excess:.6g} > 1")
