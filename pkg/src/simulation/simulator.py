"""
Received-signal synthesis at the RIS and at the passive radar.

Snapshot ``l`` of an epoch (``0 <= l < L``) is taken at waveform time
``t = scene.max_delay + l``, so every delayed copy ``s(t - tau)`` exists.
Every epoch of a campaign sees the same waveform realization; only the RIS
phase row and the noise change from one epoch to the next.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..arrays.manifold import steering_matrix, steering_vector
from ..exceptions import DimensionError, SimulationError
from ..utils.random_utils import STREAM_NOISE, SeedLike, complex_gaussian, make_rng, seed_key
from .scene import Scene
from .waveform import Waveform, WaveformKind, generate_waveform

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EpochData:
    """Sampled PR data ``Y_n`` (N_PR x L) of epoch ``epoch_index``."""

    epoch_index: int
    y: np.ndarray

    def __post_init__(self):
        if self.y.ndim != 2:
            raise DimensionError(f"Epoch data must be a matrix, got shape {self.y.shape}")
        if not np.all(np.isfinite(self.y)):
            raise SimulationError(f"Epoch {self.epoch_index} holds non-finite samples")


@dataclass(frozen=True, eq=False)
class DataCube:
    """Campaign data: one :class:`EpochData` per RIS configuration."""

    epochs: tuple[EpochData, ...]

    def __post_init__(self):
        if not self.epochs:
            raise DimensionError("A data cube needs at least one epoch")
        shape = self.epochs[0].y.shape
        for epoch in self.epochs:
            if epoch.y.shape != shape:
                raise DimensionError(f"Epoch {epoch.epoch_index} has shape {epoch.y.shape}, expected {shape}")

    @property
    def n_epoch(self) -> int:
        return len(self.epochs)

    @property
    def n_pr(self) -> int:
        return self.epochs[0].y.shape[0]

    @property
    def l_snapshots(self) -> int:
        return self.epochs[0].y.shape[1]

    def stack(self) -> np.ndarray:
        """Data as an array of shape (N_epoch, N_PR, L)."""
        return np.stack([epoch.y for epoch in self.epochs])


def _snapshot_times(scene: Scene, waveform: Waveform, l_snapshots: int) -> np.ndarray:
    if l_snapshots < 1:
        raise ValueError(f"Need at least one snapshot, got L = {l_snapshots}")
    needed = scene.max_delay + l_snapshots
    if len(waveform) < needed:
        raise SimulationError(
            f"Waveform has {len(waveform)} samples, the scene needs {needed} (L + max delay {scene.max_delay})"
        )
    return scene.max_delay + np.arange(l_snapshots)


def _ris_incident_block(scene: Scene, waveform: Waveform, times: np.ndarray) -> np.ndarray:
    """Received signal at the RIS, ``r(t)``, for every ``t`` in ``times``; shape (M, len(times))."""
    r = np.zeros((scene.m, times.size), dtype=complex)
    if scene.k:
        manifold = steering_matrix(scene.theta_ris, scene.m, scene.spacing)
        echoes = np.stack(
            [
                gain * waveform.delayed(times, tau_ap + tau_ris)
                for gain, tau_ap, tau_ris in zip(scene.alpha, scene.tau_ap_target, scene.tau_target_ris)
            ]
        )
        r += manifold @ echoes
    if scene.alpha_0 != 0:
        a_ap = steering_vector(scene.theta_ap_ris, scene.m, scene.spacing).elements
        r += scene.alpha_0 * np.outer(a_ap, waveform.delayed(times, scene.tau_ap_ris))
    return r


def ris_incident_signal(scene: Scene, waveform: Waveform, t: int) -> np.ndarray:
    """Signal impinging on the RIS at sample time ``t`` (length-M vector)."""
    if t < scene.ris_incident_delay or t >= len(waveform):
        raise IndexError(
            f"Time {t} outside [{scene.ris_incident_delay}, {len(waveform)}) for this scene and waveform"
        )
    return _ris_incident_block(scene, waveform, np.array([t]))[:, 0]


def _check_phase_row(v_n: np.ndarray, m: int) -> np.ndarray:
    v_n = np.asarray(v_n, dtype=complex)
    if v_n.shape != (m,):
        raise DimensionError(f"RIS phase row has shape {v_n.shape}, the scene has M = {m}")
    if not np.allclose(np.abs(v_n), 1.0, atol=1e-9):
        raise SimulationError("RIS phase row entries must have unit modulus")
    return v_n


@dataclass(frozen=True, eq=False)
class _CleanTerms:
    """Epoch-independent parts of the noiseless PR data."""

    reflected: np.ndarray  # r(t - tau_ris_pr), (M, L)
    a_ris: np.ndarray  # a_PR(theta_RIS^PR), (N_PR,)
    direct: np.ndarray  # AP and target direct paths, (N_PR, L)
    rho_ris_pr: complex

    def epoch(self, v_n: np.ndarray) -> np.ndarray:
        y = self.direct.copy()
        if self.rho_ris_pr != 0:
            y += self.rho_ris_pr * np.outer(self.a_ris, v_n @ self.reflected)
        return y


def _clean_terms(scene: Scene, waveform: Waveform, l_snapshots: int) -> _CleanTerms:
    times = _snapshot_times(scene, waveform, l_snapshots)
    direct = np.zeros((scene.n_pr, l_snapshots), dtype=complex)

    if scene.rho_ap_pr != 0:
        a_ap = steering_vector(scene.theta_ap_pr, scene.n_pr, scene.spacing).elements
        direct += scene.rho_ap_pr * np.outer(a_ap, waveform.delayed(times, scene.tau_ap_pr))

    for gain, theta, tau_ap, tau_pr in zip(scene.rho, scene.theta_pr, scene.tau_ap_target, scene.tau_target_pr):
        a_k = steering_vector(theta, scene.n_pr, scene.spacing).elements
        direct += gain * np.outer(a_k, waveform.delayed(times, tau_ap + tau_pr))

    if scene.rho_ris_pr != 0:
        reflected = _ris_incident_block(scene, waveform, times - scene.tau_ris_pr)
    else:
        reflected = np.zeros((scene.m, l_snapshots), dtype=complex)

    return _CleanTerms(
        reflected=reflected,
        a_ris=steering_vector(scene.theta_ris_pr, scene.n_pr, scene.spacing).elements,
        direct=direct,
        rho_ris_pr=scene.rho_ris_pr,
    )


def clean_epoch(scene: Scene, v_n: np.ndarray, waveform: Waveform, l_snapshots: int) -> np.ndarray:
    """Noiseless PR data of one epoch, shape (N_PR, L)."""
    v_n = _check_phase_row(v_n, scene.m)
    return _clean_terms(scene, waveform, l_snapshots).epoch(v_n)


def _noisy(y: np.ndarray, noise_power: float, seed: SeedLike, epoch_index: int) -> EpochData:
    if noise_power > 0:
        y = y + complex_gaussian(make_rng(seed), y.shape, noise_power)
    return EpochData(epoch_index=epoch_index, y=y)


def simulate_epoch(
    scene: Scene, v_n: np.ndarray, waveform: Waveform, l_snapshots: int, seed: SeedLike, epoch_index: int = 0
) -> EpochData:
    """PR data ``Y_n`` of one epoch with RIS phase row ``v_n`` and i.i.d. circular Gaussian noise."""
    return _noisy(clean_epoch(scene, v_n, waveform, l_snapshots), scene.noise_power, seed, epoch_index)


def _phase_rows(phases) -> np.ndarray:
    return np.asarray(getattr(phases, "v", phases), dtype=complex)


def waveform_length(scene: Scene, l_snapshots: int) -> int:
    return scene.max_delay + l_snapshots


def simulate_campaign(
    scene: Scene,
    phases,
    l_snapshots: int,
    seed: SeedLike,
    waveform: Waveform | None = None,
    workers: int = 1,
) -> DataCube:
    """Stack of epochs, epoch ``n`` reflecting with row ``n`` of ``phases`` (a PhaseMatrix or array).

    Noise of epoch ``n`` comes from its own substream keyed by ``(seed, n)``, so
    ``workers > 1`` gives the same cube as a sequential run.
    """
    rows = _phase_rows(phases)
    if rows.ndim != 2 or rows.shape[1] != scene.m:
        raise DimensionError(f"Phase matrix has shape {rows.shape}, expected (N_epoch, {scene.m})")
    if waveform is None:
        waveform = generate_waveform(waveform_length(scene, l_snapshots), WaveformKind.QPSK, seed)

    key = seed_key(seed)
    terms = _clean_terms(scene, waveform, l_snapshots)

    def run(n: int) -> EpochData:
        y = terms.epoch(_check_phase_row(rows[n], scene.m))
        return _noisy(y, scene.noise_power, (*key, STREAM_NOISE, n), n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            epochs = tuple(pool.map(run, range(rows.shape[0])))
    else:
        epochs = tuple(run(n) for n in range(rows.shape[0]))

    logger.debug("Simulated %d epochs of %d x %d samples", len(epochs), scene.n_pr, l_snapshots)
    return DataCube(epochs=epochs)


def signal_power(scene: Scene, waveform: Waveform, phases=None, l_snapshots: int | None = None) -> float:
    """Mean per-entry power of the noiseless PR data, averaged over the given phase rows."""
    if l_snapshots is None:
        l_snapshots = len(waveform) - scene.max_delay
    rows = np.ones((1, scene.m), dtype=complex) if phases is None else _phase_rows(phases)
    terms = _clean_terms(scene, waveform, l_snapshots)
    powers = [np.mean(np.abs(terms.epoch(_check_phase_row(row, scene.m))) ** 2) for row in rows]
    return float(np.mean(powers))


def calibrate_noise(
    scene: Scene,
    waveform: Waveform,
    target_snr_db: float,
    phases=None,
    l_snapshots: int | None = None,
) -> float:
    """Noise variance giving ``target_snr_db`` at the PR.

    The signal power is measured on the noiseless data of every epoch in
    ``phases`` (all-ones RIS row when omitted).
    """
    power = signal_power(scene, waveform, phases, l_snapshots)
    if power <= 0.0:
        raise SimulationError("Scene carries no signal at the PR, SNR is undefined")
    return power / 10.0 ** (target_snr_db / 10.0)
