"""Config file and run manifest models."""

import hashlib
import json
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator

from app.bounds import SweepGrid
from app.core.settings import settings
from app.theta import ThetaSpec


class ExperimentConfig(BaseModel):
    """
    A JSON experiment file: a counting grid plus theta checks.

    Example:
        {"name": "acceptance", "seed": 7,
         "grid": {"N": [1, 2, 6], "delta": [1, 0.1], "T": [0.5, 1, 2], "n": ["1", "-1"]},
         "theta": [{"family": "maass", "N": 2, "ell": 2}]}
    """

    name: str = "experiment"
    seed: int = 0
    grid: SweepGrid = Field(default_factory=SweepGrid)
    theta: List[ThetaSpec] = Field(default_factory=list)
    calibration_constant: float = Field(default_factory=lambda: settings.CALIBRATION_CONSTANT, gt=0)
    minimum_constant: float = Field(default_factory=lambda: settings.MINIMUM_CONSTANT, gt=0)
    output_dir: Path = Field(default_factory=lambda: settings.OUTPUT_DIR)

    @model_validator(mode="after")
    def check_grids(self) -> "ExperimentConfig":
        grid = self.grid
        empty = [name for name in ("d_B", "N", "delta", "T") if not getattr(grid, name)]
        if not grid.points and not grid.level_points and not grid.al_random_seeds:
            empty.append("points")
        if empty:
            raise ValueError(f"empty grid axes: {', '.join(empty)}")
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        return cls.model_validate_json(Path(path).read_text())

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        """sha256 of the canonical (sorted-key) JSON form."""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


class RunManifest(BaseModel):
    """Written next to every report: what ran, from which config, and the verdicts."""

    tool_version: str
    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: str
    config_hash: str
    seed: Optional[int] = None
    wall_seconds: float
    checks: Dict[str, bool] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def hash_options(options: Dict) -> str:
    """Config hash for runs driven by command-line flags instead of a file."""
    canonical = json.dumps(options, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
