"""
Pseudo-spectrum and detection result types.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..arrays.manifold import AngleGrid


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Power ``P(theta)`` on every angle of ``grid``."""

    grid: AngleGrid
    p: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (len(self.grid),):
            raise ValueError(f"Spectrum has {p.size} values for a {len(self.grid)}-point grid")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("Spectrum values must be finite and non-negative")
        if self.normalized and not np.isclose(p.max(), 1.0):
            raise ValueError(f"Normalized spectrum must peak at 1, got {p.max()}")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def angles(self) -> np.ndarray:
        return self.grid.values

    @property
    def argmax_angle(self) -> float:
        return float(self.grid.values[np.argmax(self.p)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"angle_deg": self.grid.values, "power": self.p})

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.6g")
        return path


class Detection(BaseModel):
    """Detected target angles (grid points, ascending)."""

    angles: list[float] = Field(default_factory=list, description="Detected angles in degrees")

    @model_validator(mode="after")
    def _sorted(self) -> "Detection":
        if self.angles != sorted(self.angles):
            raise ValueError("Detected angles must be sorted ascending")
        return self

    @property
    def k_hat(self) -> int:
        return len(self.angles)
