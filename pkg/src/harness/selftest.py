"""
In-process invariant checks, runnable without pytest.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ..arrays.manifold import AngleGrid, steering_matrix, steering_vector
from ..config.settings import ExperimentConfig, NlmsConfig
from ..estimators.batch_nlms import BatchNlmsEstimator
from ..estimators.peaks import detect_peaks, normalize_spectrum
from ..estimators.sequential_nlms import SequentialNlmsEstimator
from ..estimators.spectrum import Spectrum
from ..radar.beamformer import compute_weights
from ..ris.control import ap_suppression, build_ris_matrix, orthogonal_projector
from ..simulation.scene import Scene
from ..simulation.simulator import clean_epoch, waveform_length
from ..simulation.waveform import generate_waveform
from ..utils.random_utils import complex_gaussian, make_rng
from .experiment import ris_inputs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def literal_batch_spectrum(z: np.ndarray, v: np.ndarray, grid: np.ndarray, mu: float, eps: float) -> np.ndarray:
    """Angle-by-angle, snapshot-by-snapshot batch NLMS on unscaled input."""
    n_epoch, l_snapshots = z.shape
    power = np.zeros(grid.size)
    for g, theta in enumerate(grid):
        a = steering_vector(theta, v.shape[1]).elements
        a_hat = np.zeros(n_epoch, dtype=complex)
        for ell in range(l_snapshots):
            z_l = z[:, ell]
            p_l = a.conj() @ v.conj().T @ z_l
            a_hat = a_hat + mu / (np.linalg.norm(z_l) + eps) * np.conj(p_l - a_hat.conj() @ z_l) * z_l
        power[g] = np.linalg.norm(a_hat) ** 2
    return power


def _projector_null(rng: np.random.Generator) -> tuple[bool, str]:
    worst = 0.0
    for m in (4, 16, 64):
        for theta in rng.uniform(-90, 90, size=100):
            a = steering_vector(theta, m).elements
            worst = max(worst, np.linalg.norm(orthogonal_projector(a) @ a) / np.linalg.norm(a))
    return worst <= 1e-10, f"max ||P a|| / ||a|| = {worst:.2e}"


def _unit_modulus(rng: np.random.Generator) -> tuple[bool, str]:
    worst = 0.0
    for build in range(100):
        phases = build_ris_matrix(rng.uniform(-90, 90), 16, 20, (build,))
        worst = max(worst, np.max(np.abs(np.abs(phases.v) - 1.0)))
    return worst <= 1e-12, f"max ||V_ij| - 1| = {worst:.2e}"


def _ap_suppressed(rng: np.random.Generator) -> tuple[bool, str]:
    phases = build_ris_matrix(-10.0, 64, 200, 1)
    nulled = ap_suppression(phases, -10.0)
    other = ap_suppression(phases, 20.0)
    return nulled < 0.5 * other, f"|V a|^2 per epoch: {nulled:.1f} at the AP vs {other:.1f} elsewhere"


def _distortionless(rng: np.random.Generator) -> tuple[bool, str]:
    worst = 0.0
    for theta in rng.uniform(-90, 90, size=50):
        weights = compute_weights(theta, 8)
        worst = max(worst, abs(weights.response(theta) - 1.0))
    return worst <= 1e-12, f"max |w^H a - 1| = {worst:.2e}"


def _batch_oracle(rng: np.random.Generator) -> tuple[bool, str]:
    config = NlmsConfig(grid_start=-60.0, grid_stop=60.0, grid_step=8.0, normalize_input=False)
    worst = 0.0
    for _ in range(5):
        z = complex_gaussian(rng, (8, 16))
        v = np.exp(2j * np.pi * rng.uniform(size=(8, 4)))
        fast = BatchNlmsEstimator(config).spectrum(z, v).p
        slow = literal_batch_spectrum(z, v, config.grid.values, config.mu, config.epsilon_norm)
        worst = max(worst, np.max(np.abs(fast - slow)))
    return worst <= 1e-9, f"max deviation {worst:.2e}"


def _zero_input(rng: np.random.Generator) -> tuple[bool, str]:
    z = np.zeros((6, 10), dtype=complex)
    v = np.exp(2j * np.pi * rng.uniform(size=(6, 4)))
    batch = BatchNlmsEstimator().spectrum(z, v).p
    sequential = SequentialNlmsEstimator().spectra(z, v)
    ok = not batch.any() and all(not s.p.any() for s in sequential)
    return ok, "both spectra identically zero" if ok else "nonzero spectrum from zero input"


def _phase_invariance(rng: np.random.Generator) -> tuple[bool, str]:
    z = complex_gaussian(rng, (10, 20))
    v = np.exp(2j * np.pi * rng.uniform(size=(10, 8)))
    rotation = np.exp(1j * rng.uniform(0, 2 * np.pi))
    worst = 0.0
    for estimator in (BatchNlmsEstimator(), SequentialNlmsEstimator()):
        p = estimator.spectrum(z, v).p
        q = estimator.spectrum(rotation * z, v).p
        worst = max(worst, np.max(np.abs(p - q)) / np.max(p))
    return worst <= 1e-9, f"max relative change {worst:.2e}"


def _noiseless_localization(rng: np.random.Generator) -> tuple[bool, str]:
    scene = Scene(
        m=64,
        theta_ris=[20.0],
        theta_pr=[20.0],
        tau_ap_target=[2],
        tau_target_ris=[3],
        tau_target_pr=[1],
        alpha=[1.0 + 0j],
        rho=[0j],
        alpha_0=0j,
        rho_ap_pr=0j,
    )
    inputs = ris_inputs(scene, ExperimentConfig(m=64), None, 3)
    found = [est.spectrum(inputs.z, inputs.v).argmax_angle for est in (BatchNlmsEstimator(), SequentialNlmsEstimator())]
    ok = all(abs(angle - 20.0) <= 0.5 for angle in found)
    return ok, f"argmax (batch, sequential) = {found}"


def _gain_linearity(rng: np.random.Generator) -> tuple[bool, str]:
    scene = Scene.random([15.0, -30.0], seed=int(rng.integers(1 << 31)), m=8, n_pr=4)
    waveform = generate_waveform(waveform_length(scene, 20), seed=1)
    v_n = np.exp(2j * np.pi * rng.uniform(size=scene.m))
    factor = complex(rng.standard_normal(), rng.standard_normal())
    reference = clean_epoch(scene, v_n, waveform, 20)
    worst = np.max(np.abs(clean_epoch(scene.scaled(factor), v_n, waveform, 20) - factor * reference))
    return worst <= 1e-10 * max(1.0, abs(factor)), f"max |Y(c gains) - c Y| = {worst:.2e}"


def _threshold_monotone(rng: np.random.Generator) -> tuple[bool, str]:
    grid = AngleGrid(-90.0, 90.0, 1.0)
    spectrum = normalize_spectrum(Spectrum(grid=grid, p=rng.uniform(size=len(grid))))
    counts = [detect_peaks(spectrum, phi).k_hat for phi in np.linspace(0.05, 0.95, 19)]
    ok = all(a >= b for a, b in zip(counts, counts[1:]))
    return ok, f"peak counts {counts[0]} -> {counts[-1]}"


def _manifold_consistency(rng: np.random.Generator) -> tuple[bool, str]:
    angles = rng.uniform(-90, 90, size=10)
    matrix = steering_matrix(angles, 12)
    ok = all(np.array_equal(matrix[:, i], steering_vector(a, 12).elements) for i, a in enumerate(angles))
    return ok, "matrix columns equal steering vectors" if ok else "matrix columns differ"


CHECKS: dict[str, Callable[[np.random.Generator], tuple[bool, str]]] = {
    "steering matrix columns": _manifold_consistency,
    "projector null": _projector_null,
    "unit modulus phases": _unit_modulus,
    "AP direction suppressed": _ap_suppressed,
    "distortionless beamformer": _distortionless,
    "batch NLMS against literal loop": _batch_oracle,
    "zero input gives zero spectrum": _zero_input,
    "global phase invariance": _phase_invariance,
    "noiseless single target": _noiseless_localization,
    "linear in path gains": _gain_linearity,
    "threshold monotonicity": _threshold_monotone,
}


def run_selftest(seed: int = 0) -> list[CheckResult]:
    """Run every check; a check that raises is reported as failed."""
    results = []
    for i, (name, check) in enumerate(CHECKS.items()):
        try:
            passed, detail = check(make_rng(seed, i))
        except Exception as e:  # reported, not raised
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.debug("%s: %s (%s)", name, "ok" if passed else "FAILED", detail)
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
