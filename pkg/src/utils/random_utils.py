"""
Seeded random streams.

Every random draw in the toolkit comes from a generator keyed by a tuple of
integers, e.g. ``(seed, sweep_index, trial_index, STREAM_NOISE, epoch)``.
Keys never depend on execution order, so parallel and sequential runs match.
"""

from collections.abc import Sequence

import numpy as np

SeedLike = int | Sequence[int]

# Stream tags. Appended to a seed key to split it into independent substreams.
STREAM_WAVEFORM = 11
STREAM_NOISE = 12
STREAM_SCENE = 13
STREAM_PHASES = 14


def seed_key(seed: SeedLike) -> tuple[int, ...]:
    """Normalize an int or a sequence of ints to a tuple key."""
    if isinstance(seed, (int, np.integer)):
        key = (int(seed),)
    else:
        key = tuple(int(s) for s in seed)
    if not key or any(s < 0 for s in key):
        raise ValueError(f"Seed key must be a nonempty sequence of non-negative ints, got {seed!r}")
    return key


def make_rng(seed: SeedLike, *stream: int) -> np.random.Generator:
    """Return a generator for ``seed`` extended with the ``stream`` tags."""
    return np.random.default_rng(list(seed_key(seed) + tuple(stream)))


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian samples; real and imaginary parts each carry ``variance / 2``."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
