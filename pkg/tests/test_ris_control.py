import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import stats

from src.arrays.manifold import steering_vector
from src.exceptions import DimensionError
from src.ris.control import PhaseMatrix, ap_suppression, build_ris_matrix, orthogonal_projector, phase_extract


@pytest.mark.parametrize("m", [4, 16, 64])
def test_projector_annihilates_steering_vector(m, rng):
    for theta in rng.uniform(-90, 90, size=100):
        a = steering_vector(theta, m)
        assert np.linalg.norm(orthogonal_projector(a) @ a.elements) <= 1e-10 * np.sqrt(m)


def test_projector_is_hermitian_and_idempotent():
    p = orthogonal_projector(steering_vector(-10.0, 8))
    assert_allclose(p, p.conj().T, atol=1e-14)
    assert_allclose(p @ p, p, atol=1e-12)
    assert np.trace(p).real == pytest.approx(7.0)


def test_projector_rejects_zero_vector():
    with pytest.raises(ValueError):
        orthogonal_projector(np.zeros(4))


def test_phase_matrix_is_unit_modulus(rng):
    for build in range(100):
        phases = build_ris_matrix(rng.uniform(-90, 90), 16, 10, seed=build)
        assert phases.v.shape == (10, 16)
        assert np.max(np.abs(np.abs(phases.v) - 1.0)) <= 1e-12


def test_rows_before_phase_mapping_null_the_ap():
    a = steering_vector(-10.0, 16)
    p = orthogonal_projector(a)
    gamma = np.random.default_rng(0).standard_normal((5, 16)) + 0j
    assert_allclose((gamma @ p) @ a.elements, 0.0, atol=1e-12)


def test_build_is_deterministic():
    first = build_ris_matrix(-10.0, 8, 6, seed=(1, 2, 3))
    second = build_ris_matrix(-10.0, 8, 6, seed=(1, 2, 3))
    assert_array_equal(first.v, second.v)
    assert not np.array_equal(first.v, build_ris_matrix(-10.0, 8, 6, seed=(1, 2, 4)).v)


def test_ap_direction_is_suppressed():
    phases = build_ris_matrix(-10.0, 64, 400, seed=7)
    at_ap = ap_suppression(phases, -10.0)
    elsewhere = np.mean([ap_suppression(phases, theta) for theta in (20.0, 30.0, 45.0)])
    assert elsewhere == pytest.approx(64, rel=0.25)
    assert at_ap < 0.5 * elsewhere


def test_suppression_beats_random_phases(rng):
    m, n_epoch = 16, 1000
    a_ap = steering_vector(-10.0, m).elements
    designed = np.abs(build_ris_matrix(-10.0, m, n_epoch, seed=3).v @ a_ap) ** 2
    random_rows = np.exp(2j * np.pi * rng.uniform(size=(n_epoch, m)))
    reference = np.abs(random_rows @ a_ap) ** 2

    assert np.mean(reference) == pytest.approx(m, rel=0.15)
    result = stats.ttest_ind(designed, reference, equal_var=False, alternative="less")
    assert result.pvalue < 0.05


def test_phase_extract_validates():
    with pytest.raises(DimensionError):
        phase_extract(np.ones((3, 4)), 5, seed=0)
    with pytest.raises(ValueError):
        phase_extract(np.eye(3), 0, seed=0)


def test_ris_needs_two_elements():
    with pytest.raises(ValueError):
        build_ris_matrix(-10.0, 1, 5, seed=0)


def test_phase_matrix_validation():
    with pytest.raises(ValueError):
        PhaseMatrix(v=np.full((2, 3), 0.9 + 0j))
    with pytest.raises(DimensionError):
        PhaseMatrix(v=np.ones(3))


def test_phase_matrix_is_read_only():
    phases = PhaseMatrix(v=np.ones((2, 2)))
    with pytest.raises(ValueError):
        phases.v[0, 0] = 1j


def test_phase_matrix_csv(tmp_path):
    phases = PhaseMatrix(v=np.exp(1j * np.array([[0.0, 1.0], [-1.0, 0.5]])))
    frame = pd.read_csv(phases.to_csv(tmp_path / "v.csv"), index_col="epoch")
    assert list(frame.columns) == ["phase_0", "phase_1"]
    assert_allclose(frame.to_numpy(), [[0.0, 1.0], [-1.0, 0.5]], atol=1e-6)
