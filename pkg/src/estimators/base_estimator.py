"""
Base estimator class and input handling shared by both NLMS variants.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import numpy as np

from ..arrays.manifold import DEFAULT_SPACING, steering_matrix
from ..config.settings import NlmsConfig
from ..exceptions import DimensionError, DivergenceError, NoDetectableEnergyError
from .peaks import detect_peaks, normalize_spectrum
from .spectrum import Detection, Spectrum

logger = logging.getLogger(__name__)


def as_blocks(z) -> np.ndarray:
    """Beamformed data as a stack of blocks, shape (B, N, L).

    Accepts a ``BeamformedData``, an (N, L) matrix or an already stacked array.
    """
    z = np.asarray(getattr(z, "z", z), dtype=complex)
    if z.ndim == 2:
        z = z[np.newaxis]
    if z.ndim != 3 or 0 in z.shape:
        raise DimensionError(f"Expected (N, L) data or a stack of such blocks, got shape {z.shape}")
    return z


def as_mixing_matrix(v) -> np.ndarray:
    """Phase rows of a ``PhaseMatrix``, or any (N, M) complex matrix."""
    v = np.asarray(getattr(v, "v", v), dtype=complex)
    if v.ndim != 2 or 0 in v.shape:
        raise DimensionError(f"Expected an (N, M) matrix, got shape {v.shape}")
    return v


class BaseEstimator(ABC):
    """Base class of the grid-search NLMS estimators.

    Subclasses implement :meth:`_run`, which receives the data blocks and the
    reference matrix ``U = V A(grid)`` and returns every emitted spectrum.
    """

    name = "base"

    def __init__(self, config: Optional[NlmsConfig] = None, spacing: float = DEFAULT_SPACING):
        self.config = config or NlmsConfig()
        self.spacing = spacing
        self.grid = self.config.grid

    @abstractmethod
    def _run(self, z: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Spectra of shape (S, B, G) for blocks ``z`` (B, N, L) and references ``u`` (N, G)."""

    def _prepare(self, z, v) -> tuple[np.ndarray, np.ndarray]:
        z = as_blocks(z)
        v = as_mixing_matrix(v)
        if z.shape[1] != v.shape[0]:
            raise DimensionError(f"Data has {z.shape[1]} rows, the mixing matrix has {v.shape[0]}")

        if self.config.normalize_input:
            rms = np.sqrt(np.sum(np.abs(z) ** 2, axis=(1, 2)) / z.shape[2])
            rms[rms == 0.0] = 1.0
            z = z / rms[:, None, None]

        u = v @ steering_matrix(self.grid.values, v.shape[1], self.spacing)
        return z, u

    def block_spectra(self, z, v) -> np.ndarray:
        """Raw output of :meth:`_run`, checked for overflow."""
        z, u = self._prepare(z, v)
        p = self._run(z, u)
        if not np.all(np.isfinite(p)):
            raise DivergenceError(
                f"{self.name} NLMS overflowed (mu = {self.config.mu}); lower mu or enable input normalization"
            )
        return p

    def spectra(self, z, v) -> List[Spectrum]:
        """Every emitted spectrum, summed over blocks."""
        return [Spectrum(grid=self.grid, p=p.sum(axis=0)) for p in self.block_spectra(z, v)]

    def spectrum(self, z, v) -> Spectrum:
        """Final spectrum ``P(theta)``."""
        return self.spectra(z, v)[-1]

    def detect(self, spectrum: Spectrum) -> Detection:
        """Normalize and pick peaks; a spectrum without energy yields no detection."""
        try:
            normalized = normalize_spectrum(spectrum)
        except NoDetectableEnergyError:
            logger.debug("%s spectrum carries no energy, reporting no targets", self.name)
            return Detection()
        return detect_peaks(normalized, self.config.peak_threshold)

    def localize(self, z, v) -> Detection:
        return self.detect(self.spectrum(z, v))

    def get_status(self) -> Dict[str, Any]:
        """Return estimator settings."""
        return {
            "name": self.name,
            "mu": self.config.mu,
            "grid_points": len(self.grid),
            "grid_step": self.grid.step,
            "peak_threshold": self.config.peak_threshold,
            "normalize_input": self.config.normalize_input,
        }
