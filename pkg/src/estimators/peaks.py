"""
Spectrum normalization and thresholded peak picking.
"""

import numpy as np
from scipy.signal import find_peaks

from ..exceptions import NoDetectableEnergyError
from .spectrum import Detection, Spectrum


def normalize_spectrum(spectrum: Spectrum) -> Spectrum:
    """Scale ``spectrum`` so that its maximum is 1."""
    peak = spectrum.p.max()
    if peak <= 0.0:
        raise NoDetectableEnergyError("Spectrum is identically zero, nothing to detect")
    return Spectrum(grid=spectrum.grid, p=spectrum.p / peak, normalized=True)


def detect_peaks(spectrum: Spectrum, threshold: float) -> Detection:
    """Grid angles of the local maxima of a normalized spectrum reaching ``threshold``.

    A flat run of equal values counts once, at its middle sample. The grid ends
    may be peaks when they exceed their single neighbour.
    """
    if not spectrum.normalized:
        raise ValueError("Peak detection expects a normalized spectrum")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"Threshold must lie in (0, 1), got {threshold}")

    # Pad below every normalized value so that both ends can qualify.
    padded = np.concatenate(([-1.0], spectrum.p, [-1.0]))
    indices, _ = find_peaks(padded, height=threshold)
    return Detection(angles=[float(spectrum.grid.values[i - 1]) for i in indices])
