import json
from math import gcd
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator
from sympy import factorint

from app.core.settings import settings
from app.lattice import SUPPORTED_DISCRIMINANTS, is_squarefree
from .exceptions import InvalidFamilyError, InvalidNewformDataError
from .kernels import KernelShape, kernel_shape


class ThetaSpec(BaseModel):
    """
    One theta kernel θ_{g,ℓ}: family, order data, ℓ and the frame g.

    Split kernels take σ_z at z = x + iy (and σ_w at w = right_x + i·right_y
    for the two-frame kernel θ(z, w; ·)); definite kernels take the rotation
    from `rotation_seed`, the identity frame when absent.
    """

    model_config = ConfigDict(frozen=True)

    family: Literal["maass", "indef_hol", "def_sph", "def_hol"] = "maass"
    k: int = 0
    m: int = 0
    d_B: int = 1
    N: int = 1
    ell: int = 1
    x: float = 0.0
    y: float = 1.0
    right_x: Optional[float] = None
    right_y: Optional[float] = None
    rotation_seed: Optional[int] = None
    accuracy: float = Field(default_factory=lambda: settings.THETA_ACCURACY, gt=0)

    @model_validator(mode="after")
    def check_family(self) -> "ThetaSpec":
        if self.d_B not in SUPPORTED_DISCRIMINANTS:
            raise InvalidFamilyError(self.family, f"unsupported d_B={self.d_B}")
        if not is_squarefree(self.N) or gcd(self.N, self.d_B) != 1:
            raise InvalidFamilyError(self.family, f"N={self.N} must be squarefree and coprime to d_B")
        if self.ell < 1 or (self.d_B * self.N) % self.ell:
            raise InvalidFamilyError(self.family, f"ℓ={self.ell} must divide {self.d_B * self.N}")
        split_family = self.family in ("maass", "indef_hol")
        if split_family != (self.d_B == 1):
            raise InvalidFamilyError(self.family, f"not defined on the algebra of discriminant {self.d_B}")
        if self.family != "def_sph" and (self.k < 0 or self.k % 2):
            raise InvalidFamilyError(self.family, f"k={self.k} must be even and non-negative")
        if self.family == "def_hol" and self.k < 2:
            raise InvalidFamilyError(self.family, "needs k ≥ 2")
        if self.family == "def_sph" and self.m < 0:
            raise InvalidFamilyError(self.family, f"m={self.m} must be non-negative")
        if self.y <= 0 or (self.right_y is not None and self.right_y <= 0):
            raise InvalidFamilyError(self.family, "frame points must lie in the upper half plane")
        return self

    @property
    def is_split(self) -> bool:
        return self.d_B == 1

    @property
    def kernel(self) -> str:
        """indef_hol below weight 6 is summed with the maass kernel."""
        if self.family == "indef_hol" and self.k < 6:
            return "maass"
        return self.family

    @property
    def shape(self) -> KernelShape:
        return kernel_shape(self.kernel, self.k, self.m)

    @property
    def kappa(self) -> int:
        return self.shape.kappa

    @property
    def level(self) -> int:
        return self.d_B * self.N

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def w(self) -> Optional[complex]:
        if self.right_y is None:
            return None
        return complex(self.right_x or 0.0, self.right_y)


class NewformData(BaseModel):
    """
    A holomorphic newform by its q-expansion coefficients a₁, a₂, …

    Coefficients are arithmetically normalized (a₁ = 1). On disk they are
    JSON {"k": 12, "N": 1, "coeffs": ["1", "-24", ...]}.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    N: int = 1
    coeffs: Tuple[int, ...]
    source: str = "file"

    @field_validator("coeffs", mode="before")
    @classmethod
    def parse_coeffs(cls, v):
        try:
            return tuple(int(c) for c in v)
        except (TypeError, ValueError):
            raise InvalidNewformDataError("coefficients must be integers or integer strings")

    @field_serializer("coeffs")
    def serialize_coeffs(self, v: Tuple[int, ...]) -> List[str]:
        return [str(c) for c in v]

    @model_validator(mode="after")
    def check_normalization(self) -> "NewformData":
        if not self.coeffs or self.coeffs[0] != 1:
            raise InvalidNewformDataError("a₁ must be 1")
        if self.k < 2 or self.k % 2 or self.N < 1:
            raise InvalidNewformDataError(f"weight {self.k} and level {self.N} are not supported")
        return self

    @property
    def n_max(self) -> int:
        return len(self.coeffs)

    def coefficient(self, n: int) -> int:
        return self.coeffs[n - 1]

    def multiplicativity_violations(self, limit: int = 50) -> List[Tuple[int, int]]:
        """Coprime pairs (m, n) with mn ≤ limit where a_{mn} ≠ a_m a_n."""
        limit = min(limit, self.n_max)
        return [
            (a, b)
            for a in range(2, limit + 1)
            for b in range(a + 1, limit // a + 1)
            if gcd(a, b) == 1 and self.coefficient(a * b) != self.coefficient(a) * self.coefficient(b)
        ]

    def hecke_violations(self, limit: int = 50) -> List[int]:
        """Primes p with p² ≤ limit, p ∤ N, where a_{p²} ≠ a_p² − p^{k−1}."""
        limit = min(limit, self.n_max)
        return [
            p for p in range(2, int(limit ** 0.5) + 1)
            if factorint(p) == {p: 1} and self.N % p
            and self.coefficient(p * p) != self.coefficient(p) ** 2 - p ** (self.k - 1)
        ]

    @classmethod
    def load(cls, path: Union[str, Path]) -> "NewformData":
        data = json.loads(Path(path).read_text())
        return cls(k=data["k"], N=data.get("N", 1), coeffs=data["coeffs"], source=str(path))

    def dump(self, path: Union[str, Path]) -> None:
        payload = {"k": self.k, "N": self.N, "coeffs": [str(c) for c in self.coeffs]}
        Path(path).write_text(json.dumps(payload, indent=2))


class TransformReport(BaseModel):
    """Largest deviation of a slash identity over its test points."""

    check: str
    family: str
    ell: int
    kappa: int
    factor: float
    points: List[complex]
    deviation: float
    scale: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


class PdeReport(BaseModel):
    """Finite-difference residuals of −ΔΦ + (2π)² det Φ − 2πκΦ for decreasing h."""

    family: str
    kappa: int
    steps: List[float]
    residuals: List[float]
    ratios: List[float]

    @property
    def passed(self) -> bool:
        return all(3.5 <= r <= 4.5 for r in self.ratios)


class BernsteinReport(BaseModel):
    m_max: int
    grid_points: int
    worst_ratio: float
    violations: List[Tuple[int, float]]

    @property
    def passed(self) -> bool:
        return not self.violations


class PeriodicityReport(BaseModel):
    s: complex
    period: int
    deviation: float


class ParsevalReport(BaseModel):
    """Mean of |θ(x+iy)|² over one period against Σ_n |c_n(y)|²."""

    y: float
    period: int
    nodes: int
    mean_square: float
    coefficient_sum: float

    @property
    def relative_error(self) -> float:
        return abs(self.mean_square - self.coefficient_sum) / max(self.coefficient_sum, 1e-300)


class LiftPoint(BaseModel):
    z: complex
    lhs: complex
    rhs: float
    ratio: float
    relative_error: float


class LiftReport(BaseModel):
    """⟨θ_z, f̃⟩/⟨f̃, f̃⟩ against |f̃(z)|²/‖f̃‖² at each z; constant snapped at the first z."""

    k: int
    N: int
    norm_hyperbolic: float
    volume: float
    constant: str
    points: List[LiftPoint]
    phase_deviation: Optional[float] = None
    tolerance: float = 1e-3

    @property
    def max_relative_error(self) -> float:
        return max(p.relative_error for p in self.points)

    @property
    def passed(self) -> bool:
        phase_ok = self.phase_deviation is None or self.phase_deviation <= self.tolerance
        return self.max_relative_error <= self.tolerance and phase_ok
