"""
Sequential NLMS localization.

Epochs are processed as they arrive. Per-angle references ``d_l(theta)`` keep
accumulating across epochs; within an epoch a scalar filter ``p`` is re-adapted
from zero over the snapshots and its final energy is added to the spectrum,
which is emitted after every epoch.
"""

import logging

import numpy as np

from ..arrays.manifold import DEFAULT_SPACING
from ..config.settings import NlmsConfig
from .base_estimator import BaseEstimator
from .spectrum import Detection, Spectrum

logger = logging.getLogger(__name__)


class SequentialNlmsEstimator(BaseEstimator):
    name = "sequential"

    def _run(self, z: np.ndarray, u: np.ndarray) -> np.ndarray:
        n_blocks, n_epoch, l_snapshots = z.shape
        n_grid = u.shape[1]
        mu, eps = self.config.mu, self.config.epsilon_norm

        d = np.zeros((n_blocks, n_grid, l_snapshots), dtype=complex)
        column_energy = np.zeros((n_blocks, l_snapshots))
        power = np.zeros((n_blocks, n_grid))
        emitted = np.empty((n_epoch, n_blocks, n_grid))

        for n in range(n_epoch):
            z_n = z[:, n, :]
            column_energy += np.abs(z_n) ** 2
            d += u[n].conj()[None, :, None] * z_n[:, None, :]

            p = np.zeros((n_blocks, n_grid), dtype=complex)
            for ell in range(l_snapshots):
                z_nl = z_n[:, ell, None]
                step = mu / (column_energy[:, ell] + eps)
                p = p + step[:, None] * np.conj(d[:, :, ell] - p.conj() * z_nl) * z_nl

            power += np.abs(p) ** 2
            emitted[n] = power

        return emitted

    def detections(self, z, v) -> list[Detection]:
        """Detection after every epoch, all with the configured threshold."""
        return [self.detect(spectrum) for spectrum in self.spectra(z, v)]


def sequential_spectrum(
    z, v, config: NlmsConfig | None = None, spacing: float = DEFAULT_SPACING
) -> list[Spectrum]:
    """Running sequential NLMS spectrum, one entry per epoch."""
    return SequentialNlmsEstimator(config, spacing).spectra(z, v)


def sequential_detections(
    z, v, config: NlmsConfig | None = None, spacing: float = DEFAULT_SPACING
) -> list[Detection]:
    detections = SequentialNlmsEstimator(config, spacing).detections(z, v)
    logger.debug("Per-epoch target counts: %s", [d.k_hat for d in detections])
    return detections
