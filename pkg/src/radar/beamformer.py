"""
Passive radar beamforming towards the RIS.

A single distortionless weight ``w = a / ||a||^2`` (look angle ``theta_RIS^PR``)
is applied to every epoch, collapsing each ``Y_n`` to one row of ``Z``.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..arrays.manifold import DEFAULT_SPACING, AngleGrid, steering_matrix, steering_vector
from ..exceptions import DimensionError
from ..simulation.simulator import DataCube

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BeamWeights:
    w: np.ndarray
    look_angle: float
    spacing: float = DEFAULT_SPACING

    @property
    def n_pr(self) -> int:
        return self.w.size

    def response(self, theta: float) -> complex:
        """Beampattern value ``beta(theta) = w^H a(theta)``."""
        return complex(np.vdot(self.w, steering_vector(theta, self.n_pr, self.spacing).elements))


@dataclass(frozen=True, eq=False)
class BeamformedData:
    """Beamformer output ``Z`` (N_epoch x L); column ``l`` is the snapshot ``z_l``."""

    z: np.ndarray

    def __post_init__(self):
        if self.z.ndim != 2:
            raise DimensionError(f"Beamformed data must be a matrix, got shape {self.z.shape}")

    @property
    def n_epoch(self) -> int:
        return self.z.shape[0]

    @property
    def l_snapshots(self) -> int:
        return self.z.shape[1]

    def to_csv(self, path: str | Path) -> Path:
        """Epoch-major long format: ``epoch, snapshot, real, imag``."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        epoch, snapshot = np.indices(self.z.shape)
        frame = pd.DataFrame(
            {
                "epoch": epoch.ravel(),
                "snapshot": snapshot.ravel(),
                "real": self.z.real.ravel(),
                "imag": self.z.imag.ravel(),
            }
        )
        frame.to_csv(path, index=False, float_format="%.6g")
        return path


def compute_weights(theta_ris_pr: float, n_pr: int, spacing: float = DEFAULT_SPACING) -> BeamWeights:
    """Distortionless weight towards the RIS, ``w^H a(theta_ris_pr) = 1``."""
    if n_pr < 1:
        raise ValueError(f"Passive radar needs at least one antenna, got {n_pr}")
    a = steering_vector(theta_ris_pr, n_pr, spacing)
    return BeamWeights(w=a.elements / a.norm_squared, look_angle=a.angle, spacing=spacing)


def beampattern(weights: BeamWeights, grid: AngleGrid) -> np.ndarray:
    """``|beta(theta)|`` sampled on ``grid``."""
    manifold = steering_matrix(grid.values, weights.n_pr, weights.spacing)
    return np.abs(weights.w.conj() @ manifold)


def interference_residual(weights: BeamWeights, theta: float) -> float:
    """Output power ``|beta(theta)|^2`` left by a unit-power plane wave from ``theta``."""
    return abs(weights.response(theta)) ** 2


def beamform(cube: DataCube, weights: BeamWeights) -> BeamformedData:
    """Stack ``w^H Y_n`` over epochs into ``Z``."""
    if cube.n_pr != weights.n_pr:
        raise DimensionError(f"Cube has {cube.n_pr} antennas, weights have {weights.n_pr}")
    z = np.einsum("p,npl->nl", weights.w.conj(), cube.stack())
    logger.debug("Beamformed %d epochs towards %.2f deg", cube.n_epoch, weights.look_angle)
    return BeamformedData(z=z)
