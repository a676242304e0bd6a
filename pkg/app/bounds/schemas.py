from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from app.core.rationals import format_rational, to_fraction
from app.lattice import SUPPORTED_DISCRIMINANTS, is_squarefree
from .exceptions import InvalidExperimentError, MalformedDeterminantError


class CountExperiment(BaseModel):
    """
    One counting experiment: |g⁻¹R(ℓ)⁰g ∩ region(δ,T) (∩ det⁻¹{n})|.

    Split experiments take the frame σ_z at z = x + iy; definite ones a
    rotation from `rotation_seed` (identity when absent).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d_B: int = 1
    N: int = 1
    ell: int = 1
    x: float = 0.0
    y: float = 1.0
    rotation_seed: Optional[int] = None
    delta: float = 1.0
    T: float = 1.0
    n: Optional[Fraction] = None
    shape: Literal["Omega", "Psi"] = "Omega"

    @field_validator("n", mode="before")
    @classmethod
    def parse_n(cls, v):
        return None if v is None else to_fraction(v)

    @field_serializer("n")
    def serialize_n(self, v: Optional[Fraction]) -> Optional[str]:
        return None if v is None else format_rational(v)

    @model_validator(mode="after")
    def check_consistency(self) -> "CountExperiment":
        if self.d_B not in SUPPORTED_DISCRIMINANTS:
            raise InvalidExperimentError(f"unsupported d_B={self.d_B}")
        if not is_squarefree(self.N) or (self.d_B > 1 and self.N % self.d_B == 0):
            raise InvalidExperimentError(f"level N={self.N} must be squarefree and coprime to d_B")
        if self.ell < 1 or (self.d_B * self.N) % self.ell:
            raise InvalidExperimentError(f"ℓ={self.ell} must divide d_B·N={self.d_B * self.N}")
        if not (0 < self.delta <= 1) or self.T <= 0 or self.y <= 0:
            raise InvalidExperimentError("need 0 < δ ≤ 1, T > 0 and y > 0")
        if self.n is not None and (self.n * self.ell).denominator != 1:
            raise MalformedDeterminantError(self.n, self.ell)
        return self

    @property
    def is_split(self) -> bool:
        return self.d_B == 1

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def key(self) -> Tuple:
        return (self.d_B, self.N, self.ell, self.shape, self.delta, self.T,
                self.n if self.n is not None else Fraction(-10 ** 9), self.x, self.y,
                self.rotation_seed or 0)


class BoundReport(BaseModel):
    """One row of a counting report; ratio = observed / bound."""

    kind: str
    d_B: int
    N: int
    ell: int
    delta: float
    T: float
    n: Optional[str] = None
    H: Optional[float] = None
    observed: int
    bound: float
    ratio: float
    first_minimum: float
    threshold: float
    wall_ms: float = 0.0

    @staticmethod
    def columns() -> List[str]:
        return ["kind", "d_B", "N", "ell", "delta", "T", "n", "H", "observed", "bound",
                "ratio", "first_minimum", "threshold"]


class FiberedCountReport(BaseModel):
    """Type I count fibered by the lower-left entry c (split ad-hoc argument)."""

    direct_count: int
    fibered_count: int
    disc_count: int
    summed_bound: float
    fibers: int
    agrees: bool


class CommutatorReport(BaseModel):
    """Exhaustive congruence check of commutators over a coefficient box."""

    kind: str
    pairs: int
    membership_failures: int
    norm_failures: int
    norm_modulus: str

    @property
    def passed(self) -> bool:
        return self.membership_failures == 0 and self.norm_failures == 0


class ArchRatioReport(BaseModel):
    """max |q([x,y])|/(δT⁴) and max P([x,y])/(δT⁴) over sampled x, y in Ω(δ,T)."""

    samples: int
    max_q_ratio: float
    max_P_ratio: float
    band: float
    within_band: bool


class PairCountReport(BaseModel):
    """Equal-determinant pair counts and the splitting inequalities."""

    shape: str
    points: int
    pairs: int
    traceless_points: int
    traceless_pairs: int
    max_fiber: int
    fiber_bound_holds: bool
    splitting_constant: float
    inclusion_holds: bool


class BinaryRepReport(BaseModel):
    """|{β : q(β) = n, Q(β) ≤ X²}| against (X|n|)^{1/4}."""

    count: int
    scale: float
    ratio: float


class Prop8Sample(BaseModel):
    X: float
    count: int
    bound: float
    ratio: float


class Prop8Report(BaseModel):
    """Successive minima of an anisotropic ternary lattice against its invariants."""

    content: float
    level: float
    discriminant: float
    minima: List[float]
    lambda1_ok: bool
    product_ratio: float
    partial_ratio: float
    samples: List[Prop8Sample] = Field(default_factory=list)
    band: float
    within_band: bool


class DyadicPiece(BaseModel):
    label: str
    delta_j: Optional[float]
    count_piece: int
    count_container: int


class DyadicReport(BaseModel):
    """Cover of Ω(δ,T) ∩ det⁻¹{n} by Ω(1/16, 4δ^{1/2}T) and the dyadic shells."""

    direct_count: int
    pieces: List[DyadicPiece]
    covered: bool
    sum_pieces: int


class SweepGrid(BaseModel):
    """
    Cartesian grid of experiments for `sweep`.

    `level_points` holds pairs (x, c) placed at z = x + i·c/√N for each
    level N. An empty `n` runs Type II over every determinant attained in
    the region.
    """

    d_B: List[int] = Field(default_factory=lambda: [1])
    N: List[int] = Field(default_factory=lambda: [1])
    ell: Optional[List[int]] = None
    delta: List[float] = Field(default_factory=lambda: [1.0])
    T: List[float] = Field(default_factory=lambda: [1.0])
    points: List[Tuple[float, float]] = Field(default_factory=lambda: [(0.0, 1.0)])
    level_points: List[Tuple[float, float]] = Field(default_factory=list)
    al_random_seeds: List[int] = Field(default_factory=list)
    n: List[str] = Field(default_factory=list)
    shapes: List[Literal["Omega", "Psi"]] = Field(default_factory=lambda: ["Omega"])
