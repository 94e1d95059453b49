import numpy as np
import pytest
from numpy.testing import assert_array_equal

from src.config.settings import Algorithm, ExperimentConfig, NlmsConfig
from src.estimators.batch_nlms import BatchNlmsEstimator
from src.estimators.sequential_nlms import SequentialNlmsEstimator
from src.exceptions import SimulationError
from src.harness.experiment import build_scene, make_estimator, per_epoch_spectra, prepare_inputs, ris_inputs, run_trial
from src.harness.metrics import score_trial
from src.simulation.scene import Scene


def test_make_estimator():
    assert isinstance(make_estimator("batch", NlmsConfig(), 0.5), BatchNlmsEstimator)
    assert isinstance(make_estimator(Algorithm.SEQUENTIAL, NlmsConfig(), 0.5), SequentialNlmsEstimator)
    with pytest.raises(ValueError):
        make_estimator("music", NlmsConfig(), 0.5)


def test_scene_delays_follow_config(small_config):
    tight = small_config.model_copy(update={"max_delay": 0})
    with pytest.raises(SimulationError):
        build_scene(tight, 4)
    assert build_scene(tight.model_copy(update={"distinct_delays": False}), 4).max_delay == 0


def test_scenes_are_shared_across_ris_sizes(small_config):
    small = build_scene(small_config, (1, 2, 3), m=16)
    large = build_scene(small_config, (1, 2, 3), m=32)
    baseline = build_scene(small_config, (1, 2, 3), m=0)
    assert large.m == 32
    assert baseline.m == 1
    for other in (large, baseline):
        assert other.tau_ap_target == small.tau_ap_target
        assert other.alpha == small.alpha
        assert other.rho_ap_pr == small.rho_ap_pr


def test_ris_inputs_shape(small_config):
    inputs = prepare_inputs(small_config, 10.0, (5, 0, 0), m=16)
    assert not inputs.baseline
    assert inputs.z.shape == (1, 20, 30)
    assert inputs.v.shape == (20, 16)
    assert inputs.truth == [20.0, 40.0]
    assert inputs.scene.noise_power > 0


def test_baseline_inputs(small_config):
    cfg = small_config.model_copy(update={"target_pr_offset": 3.0})
    inputs = prepare_inputs(cfg, 10.0, (5, 0, 0), m=0)
    assert inputs.baseline
    assert inputs.z.shape == (20, 8, 30)
    assert_array_equal(inputs.v, np.eye(8))
    assert inputs.truth == [23.0, 43.0]
    assert inputs.scene.rho_ris_pr == 0


def test_explicit_scene_is_resized(small_config):
    scene = build_scene(small_config, 9, m=16)
    inputs = prepare_inputs(small_config, None, 9, m=32, scene=scene)
    assert inputs.scene.m == 32
    assert inputs.v.shape == (20, 32)


@pytest.mark.parametrize("m", [16, 0])
def test_trials_are_deterministic(small_config, m):
    first = run_trial(small_config, 10.0, (5, 0, 1), m=m)
    second = run_trial(small_config, 10.0, (5, 0, 1), m=m)
    assert first == second
    assert first.m == m
    assert first.snr_db == 10.0


def test_baseline_ignores_ris_geometry(small_config):
    moved = small_config.model_copy(update={"theta_ap_ris": 45.0, "ap_ris_gain_db": 6.0})
    assert run_trial(small_config, 0.0, (5, 1, 0), m=0) == run_trial(moved, 0.0, (5, 1, 0), m=0)


def test_noiseless_single_target_is_recovered():
    scene = Scene(
        m=64,
        theta_ris=[20.0],
        theta_pr=[20.0],
        tau_ap_target=[1],
        tau_target_ris=[2],
        tau_target_pr=[4],
        alpha=[1.0 + 0j],
        rho=[0j],
        alpha_0=0j,
        rho_ap_pr=0j,
    )
    cfg = ExperimentConfig(m=64, nlms=NlmsConfig(grid_step=1.0))
    inputs = ris_inputs(scene, cfg, None, 11)
    estimator = make_estimator(Algorithm.BATCH, cfg.nlms, cfg.spacing)
    result = score_trial(inputs.truth, estimator.localize(inputs.z, inputs.v), estimator.grid.step, m=64)
    assert result.exact_recovery


def test_per_epoch_spectra(small_config):
    sequential = make_estimator(Algorithm.SEQUENTIAL, small_config.nlms, small_config.spacing)
    ris = prepare_inputs(small_config, 10.0, 3, m=16)
    assert len(per_epoch_spectra(sequential, ris)) == 20

    baseline = prepare_inputs(small_config, 10.0, 3, m=0)
    running = per_epoch_spectra(sequential, baseline)
    assert len(running) == 20
    assert np.all(np.diff([s.p for s in running], axis=0) >= 0)
    np.testing.assert_allclose(running[-1].p, sequential.spectrum(baseline.z, baseline.v).p, rtol=1e-10)
