"""
Transmit waveform of the access point.

The estimators never use the waveform, so any unit-power communication-like
sequence will do. QPSK is the default.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..utils.random_utils import STREAM_WAVEFORM, SeedLike, complex_gaussian, make_rng


class WaveformKind(str, Enum):
    QPSK = "qpsk"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True, eq=False)
class Waveform:
    """Unit average power sample stream ``s(t)``, indexed by integer sample time."""

    samples: np.ndarray
    kind: WaveformKind = WaveformKind.QPSK

    def __len__(self) -> int:
        return self.samples.size

    @property
    def mean_power(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))

    def delayed(self, times: np.ndarray, delay: int) -> np.ndarray:
        """Samples ``s(t - delay)`` for every ``t`` in ``times``."""
        index = np.asarray(times) - int(delay)
        if index.size and (index.min() < 0 or index.max() >= self.samples.size):
            raise IndexError(
                f"Waveform of length {self.samples.size} has no samples for t - {delay} "
                f"in [{index.min()}, {index.max()}]"
            )
        return self.samples[index]


def generate_waveform(length: int, kind: WaveformKind | str = WaveformKind.QPSK, seed: SeedLike = 0) -> Waveform:
    """Generate a deterministic unit-power waveform of ``length`` samples."""
    if length < 1:
        raise ValueError(f"Waveform length must be at least 1, got {length}")
    kind = WaveformKind(kind)
    rng = make_rng(seed, STREAM_WAVEFORM)

    if kind is WaveformKind.QPSK:
        symbols = rng.integers(0, 4, size=length)
        samples = np.exp(1j * (np.pi / 4 + np.pi / 2 * symbols))
    else:
        samples = complex_gaussian(rng, length)
        samples = samples / np.sqrt(np.mean(np.abs(samples) ** 2))

    samples.flags.writeable = False
    return Waveform(samples=samples, kind=kind)
