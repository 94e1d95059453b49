import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.arrays.manifold import steering_vector
from src.exceptions import DimensionError, SimulationError
from src.simulation.scene import Scene
from src.simulation.simulator import (
    DataCube,
    EpochData,
    calibrate_noise,
    clean_epoch,
    ris_incident_signal,
    signal_power,
    simulate_campaign,
    simulate_epoch,
    waveform_length,
)
from src.simulation.waveform import generate_waveform


@pytest.fixture
def scene():
    return Scene(
        m=6,
        n_pr=4,
        theta_ris=[15.0, -30.0],
        theta_pr=[12.0, -25.0],
        theta_ap_ris=-10.0,
        theta_ris_pr=-40.0,
        theta_ap_pr=60.0,
        tau_ap_target=[2, 4],
        tau_target_ris=[1, 3],
        tau_target_pr=[5, 0],
        tau_ap_ris=2,
        tau_ris_pr=3,
        tau_ap_pr=1,
        alpha_0=0.5 + 0.5j,
        alpha=[1.0 + 0j, -0.3 + 0.8j],
        rho=[0.2j, 0.7 + 0j],
        rho_ap_pr=0.3 - 0.1j,
        rho_ris_pr=0.9 + 0.2j,
    )


def silent_scene(**update) -> Scene:
    return Scene(m=4, n_pr=3, alpha_0=0j, rho_ap_pr=0j, rho_ris_pr=0j, **update)


def oracle_epoch(scene, v, wf, l_snapshots):
    """Direct per-snapshot summation of every propagation path."""
    y = np.zeros((scene.n_pr, l_snapshots), dtype=complex)
    s = wf.samples
    for ell in range(l_snapshots):
        t = scene.max_delay + ell
        t_ris = t - scene.tau_ris_pr
        r = scene.alpha_0 * steering_vector(scene.theta_ap_ris, scene.m).elements * s[t_ris - scene.tau_ap_ris]
        for k in range(scene.k):
            delay = scene.tau_ap_target[k] + scene.tau_target_ris[k]
            r = r + scene.alpha[k] * steering_vector(scene.theta_ris[k], scene.m).elements * s[t_ris - delay]
        y[:, ell] += scene.rho_ris_pr * steering_vector(scene.theta_ris_pr, scene.n_pr).elements * (v @ r)
        y[:, ell] += scene.rho_ap_pr * steering_vector(scene.theta_ap_pr, scene.n_pr).elements * s[t - scene.tau_ap_pr]
        for k in range(scene.k):
            delay = scene.tau_ap_target[k] + scene.tau_target_pr[k]
            y[:, ell] += scene.rho[k] * steering_vector(scene.theta_pr[k], scene.n_pr).elements * s[t - delay]
    return y


def test_silent_scene_gives_zeros():
    scene = silent_scene()
    wf = generate_waveform(40, seed=0)
    y = clean_epoch(scene, np.ones(4), wf, 20)
    assert_array_equal(y, np.zeros((3, 20)))


def test_matches_term_by_term_oracle(scene, rng):
    l_snapshots = 25
    wf = generate_waveform(waveform_length(scene, l_snapshots), seed=1)
    v = np.exp(2j * np.pi * rng.uniform(size=scene.m))
    assert_allclose(clean_epoch(scene, v, wf, l_snapshots), oracle_epoch(scene, v, wf, l_snapshots), atol=1e-12)


def single_path_scenes(scene):
    """One copy of ``scene`` per propagation path, every other path gain zeroed."""
    silent = {
        "alpha_0": 0j,
        "alpha": [0j] * scene.k,
        "rho": [0j] * scene.k,
        "rho_ap_pr": 0j,
    }
    yield scene.model_copy(update={**silent, "alpha_0": scene.alpha_0})
    yield scene.model_copy(update={**silent, "rho_ap_pr": scene.rho_ap_pr})
    for k in range(scene.k):
        alpha = [0j] * scene.k
        alpha[k] = scene.alpha[k]
        rho = [0j] * scene.k
        rho[k] = scene.rho[k]
        yield scene.model_copy(update={**silent, "alpha": alpha})
        yield scene.model_copy(update={**silent, "rho": rho})


@pytest.mark.parametrize("factor", [2.0, 2.0 - 1.0j, -0.25j])
def test_output_scales_with_gains(scene, rng, factor):
    l_snapshots = 20
    wf = generate_waveform(waveform_length(scene, l_snapshots), seed=4)
    v = np.exp(2j * np.pi * rng.uniform(size=scene.m))

    reference = clean_epoch(scene, v, wf, l_snapshots)
    assert_allclose(clean_epoch(scene.scaled(factor), v, wf, l_snapshots), factor * reference, atol=1e-12)

    epoch = simulate_epoch(scene.scaled(factor), v, wf, l_snapshots, seed=0)
    assert_allclose(epoch.y, factor * reference, atol=1e-12)


def test_output_is_sum_of_single_paths(scene, rng):
    l_snapshots = 20
    wf = generate_waveform(waveform_length(scene, l_snapshots), seed=6)
    v = np.exp(2j * np.pi * rng.uniform(size=scene.m))

    parts = list(single_path_scenes(scene))
    assert len(parts) == 2 + 2 * scene.k
    total = sum(clean_epoch(part, v, wf, l_snapshots) for part in parts)
    assert_allclose(total, clean_epoch(scene, v, wf, l_snapshots), atol=1e-10)


def test_ris_only_scene_is_rank_one(rng):
    scene = Scene(m=8, n_pr=4, rho_ap_pr=0j, tau_ap_ris=3, tau_ris_pr=2)
    wf = generate_waveform(waveform_length(scene, 30), seed=2)
    v = np.exp(2j * np.pi * rng.uniform(size=8))
    y = clean_epoch(scene, v, wf, 30)

    a_ris = steering_vector(scene.theta_ris_pr, 4).elements
    a_ap = steering_vector(scene.theta_ap_ris, 8).elements
    expected = np.outer(a_ris, (v @ a_ap) * wf.samples[scene.max_delay - 5 + np.arange(30)])
    assert_allclose(y, expected, atol=1e-12)


def test_ris_incident_signal(scene):
    wf = generate_waveform(50, seed=3)
    t = 20
    r = ris_incident_signal(scene, wf, t)
    expected = scene.alpha_0 * steering_vector(scene.theta_ap_ris, scene.m).elements * wf.samples[t - 2]
    expected = expected + scene.alpha[0] * steering_vector(15.0, scene.m).elements * wf.samples[t - 3]
    expected = expected + scene.alpha[1] * steering_vector(-30.0, scene.m).elements * wf.samples[t - 7]
    assert_allclose(r, expected, atol=1e-12)
    with pytest.raises(IndexError):
        ris_incident_signal(scene, wf, 3)


def test_short_waveform_rejected(scene):
    wf = generate_waveform(10, seed=0)
    with pytest.raises(SimulationError):
        clean_epoch(scene, np.ones(scene.m), wf, 10)


def test_phase_row_checks(scene):
    wf = generate_waveform(waveform_length(scene, 10), seed=0)
    with pytest.raises(DimensionError):
        clean_epoch(scene, np.ones(scene.m + 1), wf, 10)
    with pytest.raises(SimulationError):
        clean_epoch(scene, 0.5 * np.ones(scene.m), wf, 10)


def test_noise_statistics():
    scene = silent_scene(noise_power=2.0)
    wf = generate_waveform(260, seed=0)
    cube = simulate_campaign(scene, np.ones((40, 4)), 250, seed=6, waveform=wf)
    data = cube.stack()
    assert data.size >= 3e4
    assert np.mean(np.abs(data) ** 2) == pytest.approx(2.0, rel=0.05)
    assert abs(np.mean(data)) < 0.05


def test_epoch_noise_is_seeded(scene, rng):
    wf = generate_waveform(waveform_length(scene, 10), seed=0)
    noisy = scene.with_noise(1.0)
    v = np.exp(2j * np.pi * rng.uniform(size=scene.m))
    first = simulate_epoch(noisy, v, wf, 10, seed=(1, 2), epoch_index=3)
    second = simulate_epoch(noisy, v, wf, 10, seed=(1, 2), epoch_index=3)
    assert first.epoch_index == 3
    assert_array_equal(first.y, second.y)


def test_campaign_shapes_and_parallel_equivalence(scene, rng):
    phases = np.exp(2j * np.pi * rng.uniform(size=(12, scene.m)))
    noisy = scene.with_noise(0.1)
    sequential = simulate_campaign(noisy, phases, 15, seed=4)
    threaded = simulate_campaign(noisy, phases, 15, seed=4, workers=4)

    assert (sequential.n_epoch, sequential.n_pr, sequential.l_snapshots) == (12, scene.n_pr, 15)
    assert sequential.stack().shape == (12, scene.n_pr, 15)
    assert_array_equal(sequential.stack(), threaded.stack())


def test_campaign_rejects_wrong_phase_shape(scene):
    with pytest.raises(DimensionError):
        simulate_campaign(scene, np.ones((5, scene.m + 1)), 10, seed=0)


def test_campaign_uses_same_waveform_every_epoch(scene, rng):
    phases = np.exp(2j * np.pi * rng.uniform(size=(3, scene.m)))
    cube = simulate_campaign(scene, phases, 10, seed=8)
    wf = generate_waveform(waveform_length(scene, 10), seed=8)
    for n, epoch in enumerate(cube.epochs):
        assert_allclose(epoch.y, oracle_epoch(scene, phases[n], wf, 10), atol=1e-12)


def test_data_containers_validate():
    with pytest.raises(DimensionError):
        EpochData(epoch_index=0, y=np.zeros(3))
    with pytest.raises(SimulationError):
        EpochData(epoch_index=0, y=np.full((2, 2), np.nan))
    with pytest.raises(DimensionError):
        DataCube(epochs=())
    with pytest.raises(DimensionError):
        DataCube(epochs=(EpochData(0, np.zeros((2, 3))), EpochData(1, np.zeros((2, 4)))))


class TestCalibration:
    def test_unit_power_definition(self):
        scene = Scene(m=4, n_pr=1, alpha_0=0j, rho_ris_pr=0j, rho_ap_pr=1 + 0j)
        wf = generate_waveform(waveform_length(scene, 50), seed=0)
        assert signal_power(scene, wf, l_snapshots=50) == pytest.approx(1.0)
        assert calibrate_noise(scene, wf, 0.0, l_snapshots=50) == pytest.approx(1.0)
        assert calibrate_noise(scene, wf, 10.0, l_snapshots=50) == pytest.approx(0.1)

    def test_silent_scene_has_no_snr(self):
        scene = silent_scene()
        wf = generate_waveform(20, seed=0)
        with pytest.raises(SimulationError):
            calibrate_noise(scene, wf, 0.0, l_snapshots=10)

    def test_remeasured_snr(self, scene, rng):
        l_snapshots = 200
        phases = np.exp(2j * np.pi * rng.uniform(size=(30, scene.m)))
        wf = generate_waveform(waveform_length(scene, l_snapshots), seed=5)
        noise = calibrate_noise(scene, wf, -20.0, phases, l_snapshots)

        clean = simulate_campaign(scene, phases, l_snapshots, seed=5, waveform=wf).stack()
        noisy = simulate_campaign(scene.with_noise(noise), phases, l_snapshots, seed=5, waveform=wf).stack()
        measured = 10 * np.log10(np.mean(np.abs(clean) ** 2) / np.mean(np.abs(noisy - clean) ** 2))
        assert measured == pytest.approx(-20.0, abs=0.5)
