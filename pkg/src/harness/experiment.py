"""
End-to-end pipeline of one trial: scene, RIS design, campaign, beamforming,
estimation and scoring.

All random draws of a trial hang off one seed key, typically
``(seed, sweep_index, trial_index)``. Runs that differ only in RIS size share
the scene, the waveform and the noise substreams.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..config.settings import Algorithm, ExperimentConfig, NlmsConfig
from ..estimators.base_estimator import BaseEstimator
from ..estimators.batch_nlms import BatchNlmsEstimator
from ..estimators.sequential_nlms import SequentialNlmsEstimator
from ..estimators.spectrum import Spectrum
from ..radar.beamformer import BeamformedData, beamform, compute_weights
from ..ris.control import PhaseMatrix, build_ris_matrix
from ..simulation.scene import Scene
from ..simulation.simulator import calibrate_noise, simulate_campaign, waveform_length
from ..simulation.waveform import generate_waveform
from ..utils.random_utils import SeedLike
from .metrics import TrialResult, score_trial

logger = logging.getLogger(__name__)

ESTIMATORS: dict[Algorithm, type[BaseEstimator]] = {
    Algorithm.BATCH: BatchNlmsEstimator,
    Algorithm.SEQUENTIAL: SequentialNlmsEstimator,
}


def make_estimator(algorithm: Algorithm | str, config: NlmsConfig, spacing: float) -> BaseEstimator:
    return ESTIMATORS[Algorithm(algorithm)](config, spacing)


@dataclass(frozen=True, eq=False)
class EstimatorInputs:
    """Everything an estimator consumes, plus the truth it should recover.

    ``z`` is a stack of blocks (B, N, L) and ``v`` the (N, M) mixing matrix.
    The RIS pipeline has a single block; the baseline has one block per epoch.
    """

    z: np.ndarray
    v: np.ndarray
    truth: list[float]
    scene: Scene
    baseline: bool
    phases: Optional[PhaseMatrix] = None
    beamformed: Optional[BeamformedData] = None


def build_scene(
    cfg: ExperimentConfig,
    seed: SeedLike,
    m: Optional[int] = None,
    targets: Optional[Sequence[float]] = None,
) -> Scene:
    """Random scene with the configured geometry; ``m = 0`` still gets a 1-element RIS model."""
    targets = list(cfg.targets if targets is None else targets)
    m = cfg.m if m is None else m
    return Scene.random(
        targets,
        seed=seed,
        targets_pr=[t + cfg.target_pr_offset for t in targets],
        m=max(m, 1),
        n_pr=cfg.n_pr,
        spacing=cfg.spacing,
        theta_ap_ris=cfg.theta_ap_ris,
        theta_ris_pr=cfg.theta_ris_pr,
        theta_ap_pr=cfg.theta_ap_pr,
        max_delay=cfg.max_delay,
        distinct_delays=cfg.distinct_delays,
        target_gain_db=cfg.target_gain_db,
        ap_ris_gain_db=cfg.ap_ris_gain_db,
        ris_pr_gain_db=cfg.ris_pr_gain_db,
        target_pr_gain_db=cfg.target_pr_gain_db,
        ap_pr_gain_db=cfg.ap_pr_gain_db,
    )


def ris_inputs(scene: Scene, cfg: ExperimentConfig, snr_db: Optional[float], seed: SeedLike) -> EstimatorInputs:
    """RIS-aided pipeline. ``snr_db=None`` keeps the scene's own noise power."""
    waveform = generate_waveform(waveform_length(scene, cfg.l_snapshots), cfg.waveform, seed)
    phases = build_ris_matrix(scene.theta_ap_ris, scene.m, cfg.n_epoch, seed, scene.spacing)
    if snr_db is not None:
        scene = scene.with_noise(calibrate_noise(scene, waveform, snr_db, phases, cfg.l_snapshots))

    cube = simulate_campaign(scene, phases, cfg.l_snapshots, seed, waveform)
    weights = compute_weights(scene.theta_ris_pr, scene.n_pr, scene.spacing)
    beamformed = beamform(cube, weights)
    return EstimatorInputs(
        z=beamformed.z[np.newaxis],
        v=phases.v,
        truth=list(scene.theta_ris),
        scene=scene,
        baseline=False,
        phases=phases,
        beamformed=beamformed,
    )


def baseline_inputs(
    scene: Scene, cfg: ExperimentConfig, snr_db: Optional[float], seed: SeedLike
) -> EstimatorInputs:
    """No-RIS pipeline: the RIS link is cut and every epoch's PR block is estimated on its own.

    The mixing matrix is the identity, so the grid references come straight from
    the PR manifold, and the truth is the PR-side target angles.
    """
    scene = scene.without_ris_path()
    waveform = generate_waveform(waveform_length(scene, cfg.l_snapshots), cfg.waveform, seed)
    idle = np.ones((cfg.n_epoch, scene.m), dtype=complex)
    if snr_db is not None:
        scene = scene.with_noise(calibrate_noise(scene, waveform, snr_db, idle, cfg.l_snapshots))

    cube = simulate_campaign(scene, idle, cfg.l_snapshots, seed, waveform)
    return EstimatorInputs(
        z=cube.stack(),
        v=np.eye(scene.n_pr, dtype=complex),
        truth=list(scene.theta_pr),
        scene=scene,
        baseline=True,
    )


def prepare_inputs(
    cfg: ExperimentConfig,
    snr_db: Optional[float],
    seed: SeedLike,
    *,
    m: Optional[int] = None,
    targets: Optional[Sequence[float]] = None,
    scene: Optional[Scene] = None,
) -> EstimatorInputs:
    """Simulate a trial; ``m = 0`` selects the no-RIS baseline."""
    m = cfg.m if m is None else m
    if scene is None:
        scene = build_scene(cfg, seed, m, targets)
    elif m > 0 and scene.m != m:
        scene = scene.model_copy(update={"m": m})
    if m == 0:
        return baseline_inputs(scene, cfg, snr_db, seed)
    return ris_inputs(scene, cfg, snr_db, seed)


def run_trial(
    cfg: ExperimentConfig,
    snr_db: float,
    seed: SeedLike,
    *,
    m: Optional[int] = None,
    targets: Optional[Sequence[float]] = None,
    scene: Optional[Scene] = None,
    algorithm: Optional[Algorithm] = None,
) -> TrialResult:
    """Simulate, estimate and score one trial."""
    m = cfg.m if m is None else m
    inputs = prepare_inputs(cfg, snr_db, seed, m=m, targets=targets, scene=scene)
    estimator = make_estimator(algorithm or cfg.algorithm, cfg.nlms, cfg.spacing)
    detection = estimator.localize(inputs.z, inputs.v)
    logger.debug("Trial %s, M=%d, %.1f dB: truth %s, detected %s", seed, m, snr_db, inputs.truth, detection.angles)
    return score_trial(inputs.truth, detection, estimator.grid.step, m=m, snr_db=snr_db)


def per_epoch_spectra(estimator: BaseEstimator, inputs: EstimatorInputs) -> list[Spectrum]:
    """Spectrum available after every epoch.

    The sequential estimator emits these natively on the RIS pipeline. On the
    baseline each epoch is a block, so the running sum of block spectra is
    reported instead.
    """
    if not inputs.baseline:
        return estimator.spectra(inputs.z, inputs.v)
    final = estimator.block_spectra(inputs.z, inputs.v)[-1]
    return [Spectrum(grid=estimator.grid, p=p) for p in np.cumsum(final, axis=0)]
