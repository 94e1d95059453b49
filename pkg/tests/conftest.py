import numpy as np
import pytest

from src.config.settings import ExperimentConfig, NlmsConfig, set_config


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def small_config() -> ExperimentConfig:
    """Scaled-down campaign that keeps a full trial well under a second."""
    return ExperimentConfig(
        targets=[20.0, 40.0],
        m=16,
        m_values=[16, 0],
        n_epoch=20,
        l_snapshots=30,
        snr_db=[10.0],
        target_counts=[1, 2],
        separations=[20.0],
        trials=2,
        seed=5,
        nlms=NlmsConfig(grid_step=1.0),
    )


@pytest.fixture(autouse=True)
def reset_global_config():
    yield
    set_config(None)
