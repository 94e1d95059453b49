"""
RIS reflection matrix design.

The batch design problem minimizes the AP to RIS contribution ``||V a(theta_AP)||^2``
under unit-modulus entries. It is relaxed in two steps: the unconstrained
minimizer is the orthogonal projector onto the complement of ``a(theta_AP)``,
then random combinations of its rows are mapped onto the unit circle.
No waveform knowledge is involved.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..arrays.manifold import DEFAULT_SPACING, SteeringVector, steering_vector
from ..exceptions import DimensionError
from ..utils.random_utils import STREAM_PHASES, SeedLike, complex_gaussian, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """RIS configuration over a campaign: row ``n`` is ``v_n^T`` (N_epoch x M, unit modulus)."""

    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=complex)
        if v.ndim != 2 or v.size == 0:
            raise DimensionError(f"Phase matrix must be a nonempty matrix, got shape {v.shape}")
        if not np.allclose(np.abs(v), 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("Every RIS reflection coefficient must have unit modulus")
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    @property
    def n_epoch(self) -> int:
        return self.v.shape[0]

    @property
    def m(self) -> int:
        return self.v.shape[1]

    def phases(self) -> np.ndarray:
        """Phases in radians, same layout as ``v``."""
        return np.angle(self.v)

    def to_csv(self, path: str | Path) -> Path:
        """Write one row per epoch, one ``phase_<m>`` column (radians) per element."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(self.phases(), columns=[f"phase_{i}" for i in range(self.m)])
        frame.index.name = "epoch"
        frame.to_csv(path, float_format="%.6g")
        return path


def orthogonal_projector(a: SteeringVector | np.ndarray) -> np.ndarray:
    """``I - a a^H / ||a||^2``: Hermitian, idempotent, annihilates ``a``."""
    a = np.asarray(getattr(a, "elements", a), dtype=complex)
    norm_squared = np.vdot(a, a).real
    if a.ndim != 1 or norm_squared == 0.0:
        raise ValueError("Projector needs a nonzero vector")
    return np.eye(a.size, dtype=complex) - np.outer(a, a.conj()) / norm_squared


def phase_extract(projector: np.ndarray, n_epoch: int, seed: SeedLike) -> PhaseMatrix:
    """Feasible phase matrix from the unconstrained solution.

    Row ``n`` holds the phases of ``gamma_n^T P`` with ``gamma_n`` a standard
    circular Gaussian vector, so before phase extraction each row annihilates
    the vector the projector was built from. ``angle(0)`` is taken as 0.
    """
    projector = np.asarray(projector, dtype=complex)
    if projector.ndim != 2 or projector.shape[0] != projector.shape[1]:
        raise DimensionError(f"Projector must be square, got shape {projector.shape}")
    if n_epoch < 1:
        raise ValueError(f"Need at least one epoch, got {n_epoch}")

    m = projector.shape[0]
    gamma = complex_gaussian(make_rng(seed, STREAM_PHASES), (m, n_epoch))
    combined = gamma.T @ projector
    return PhaseMatrix(v=np.exp(1j * np.angle(combined)))


def build_ris_matrix(
    theta_ap_ris: float, m: int, n_epoch: int, seed: SeedLike, spacing: float = DEFAULT_SPACING
) -> PhaseMatrix:
    """RIS phase matrix suppressing the AP direction ``theta_ap_ris``."""
    if m < 2:
        raise ValueError(f"RIS needs at least 2 elements to null a direction, got M = {m}")
    projector = orthogonal_projector(steering_vector(theta_ap_ris, m, spacing))
    phases = phase_extract(projector, n_epoch, seed)
    logger.debug("Built %d x %d RIS phase matrix nulling %.2f deg", n_epoch, m, theta_ap_ris)
    return phases


def ap_suppression(phases: PhaseMatrix, theta: float, spacing: float = DEFAULT_SPACING) -> float:
    """Mean of ``|v_n^T a(theta)|^2`` over the epochs of ``phases``."""
    a = steering_vector(theta, phases.m, spacing).elements
    return float(np.mean(np.abs(phases.v @ a) ** 2))
