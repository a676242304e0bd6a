from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .exceptions import InvalidRegionError

FrameKind = Literal["split", "definite"]
RegionShape = Literal["Omega", "Psi"]


@dataclass(frozen=True)
class ArchFrame:
    """
    An archimedean frame.

    split: `matrix` is a real 2×2 matrix of determinant 1 acting by
    conjugation γ ↦ g⁻¹γg. definite: `rotation` is a unit Hamilton
    quaternion acting the same way. `exact_z` keeps (x, y) when the frame
    is σ_z at a rational point, so forms can be evaluated exactly.
    """

    kind: FrameKind
    matrix: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    rotation: Optional[Tuple[float, float, float, float]] = None
    exact_z: Optional[Tuple[Fraction, Fraction]] = None

    @property
    def is_exact(self) -> bool:
        if self.kind == "split":
            return self.exact_z is not None
        return self.rotation == (1.0, 0.0, 0.0, 0.0)

    def to_json(self) -> Dict[str, Any]:
        if self.kind == "split":
            return {"kind": "split", "matrix": [list(r) for r in self.matrix]}
        return {"kind": "definite", "quaternion": list(self.rotation)}


class Region(BaseModel):
    """Ω(δ,T): P ≤ T², b²+c² ≤ δT².  Ψ(δ,T): P ≤ T², a²+d² ≤ δT²."""

    model_config = ConfigDict(frozen=True)

    shape: RegionShape = "Omega"
    delta: float = 1.0
    T: float = 1.0

    @model_validator(mode="after")
    def check_parameters(self) -> "Region":
        if not (0 < self.delta <= 1) or not self.T > 0:
            raise InvalidRegionError(self.delta, self.T)
        return self


@dataclass(frozen=True)
class ExactForms:
    """P, u, |X|² and det as exact rationals."""

    P: Fraction
    u: Fraction
    abs_X2: Fraction
    det: Fraction


@dataclass(frozen=True)
class SiegelTile:
    """τ_ℓ-translate of the strip 0 ≤ x ≤ ℓ, y ≥ y_min."""

    ell: int
    tau: Tuple[Tuple[int, int], Tuple[int, int]]
    x_range: Tuple[float, float]
    y_min: float


class Lemma61Report(BaseModel):
    """Outcome of the AL-maximal point inequalities on an integer box."""

    z: complex
    z_max: complex
    height: float
    im_bound: float
    im_ok: bool
    min_ratio: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.im_ok and self.violations == 0
