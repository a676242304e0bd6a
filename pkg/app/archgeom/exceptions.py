"""
Custom exceptions for the archimedean geometry module.
"""
from app.core.exceptions import LabException


class ArchGeomException(LabException):
    """Base exception for all archimedean geometry errors."""
    pass


class InvalidUpperHalfPlanePointError(ArchGeomException):
    """Raised when a point is not in the upper half plane."""

    def __init__(self, z):
        self.z = z
        super().__init__(f"Point {z} is not in the upper half plane (Im z must be > 0)")


class InvalidRegionError(ArchGeomException):
    """Raised when region parameters fall outside δ ∈ (0, 1], T > 0."""

    def __init__(self, delta, T):
        self.delta = delta
        self.T = T
        super().__init__(f"Invalid region parameters δ={delta}, T={T}: need 0 < δ ≤ 1 and T > 0")


class FrameMismatchError(ArchGeomException):
    """Raised when a frame of one kind is applied to the other kind of algebra."""

    def __init__(self, frame_kind, algebra_label):
        self.frame_kind = frame_kind
        self.algebra_label = algebra_label
        super().__init__(f"A {frame_kind} frame cannot be used with {algebra_label}")


class InexactFrameError(ArchGeomException):
    """Raised when exact forms are requested for a frame without rational data."""

    def __init__(self, frame):
        self.frame = frame
        super().__init__("Exact forms need a split frame σ_z at rational z or the identity definite frame")


class InvalidCuspDataError(ArchGeomException):
    """Raised when ℓ does not divide a squarefree modulus M."""

    def __init__(self, ell, modulus):
        self.ell = ell
        self.modulus = modulus
        super().__init__(f"ℓ={ell} must divide the squarefree modulus M={modulus}")
