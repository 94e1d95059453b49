"""
Batch NLMS localization.

For every grid angle an N-tap filter ``a_hat(theta)`` is adapted over the L
snapshots ``z_l`` towards the reference ``p_l(theta) = a(theta)^H V^H z_l``.
The spectrum is the energy left in the final filter, ``P(theta) = ||a_hat_L||^2``.
All grid angles are updated at once.
"""

import numpy as np

from ..arrays.manifold import DEFAULT_SPACING
from ..config.settings import NlmsConfig
from .base_estimator import BaseEstimator
from .spectrum import Spectrum


class BatchNlmsEstimator(BaseEstimator):
    name = "batch"

    def _run(self, z: np.ndarray, u: np.ndarray) -> np.ndarray:
        n_blocks, _, l_snapshots = z.shape
        mu, eps = self.config.mu, self.config.epsilon_norm
        u_conj = u.conj()

        a_hat = np.zeros((n_blocks, u.shape[1], u.shape[0]), dtype=complex)
        for ell in range(l_snapshots):
            z_l = z[:, :, ell]
            reference = z_l @ u_conj
            error = reference - np.einsum("bgn,bn->bg", a_hat.conj(), z_l)
            step = mu / (np.linalg.norm(z_l, axis=1) + eps)
            a_hat += step[:, None, None] * error.conj()[:, :, None] * z_l[:, None, :]

        return np.sum(np.abs(a_hat) ** 2, axis=2)[np.newaxis]


def batch_spectrum(z, v, config: NlmsConfig | None = None, spacing: float = DEFAULT_SPACING) -> Spectrum:
    """Batch NLMS spectrum of beamformed data ``z`` taken with mixing matrix ``v``."""
    return BatchNlmsEstimator(config, spacing).spectrum(z, v)
