"""
Archimedean geometry module.

Coordinates [a,b,c]+d of quaternions under a real frame, the forms P, u, X,
the counting regions Ω(δ,T) and Ψ(δ,T), and cusp / height data for Γ₀(N).
"""

from .schemas import ArchFrame, Region, ExactForms, SiegelTile, Lemma61Report
from .services import ArchGeomService, hamilton_mul
from .cusps import CuspService
from .exceptions import (
    ArchGeomException,
    InvalidUpperHalfPlanePointError,
    InvalidRegionError,
    FrameMismatchError,
    InexactFrameError,
    InvalidCuspDataError,
)

__all__ = [
    "ArchFrame",
    "Region",
    "ExactForms",
    "SiegelTile",
    "Lemma61Report",
    "ArchGeomService",
    "hamilton_mul",
    "CuspService",
    "ArchGeomException",
    "InvalidUpperHalfPlanePointError",
    "InvalidRegionError",
    "FrameMismatchError",
    "InexactFrameError",
    "InvalidCuspDataError",
]
