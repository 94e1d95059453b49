"""
Ground-truth scene geometry of the RIS-aided passive radar setup.

One single-antenna access point (AP) illuminates K targets. An M-element RIS
collects the target echoes plus the AP direct path and reflects them towards
an N_PR-element passive radar (PR), which also sees the AP and the targets
directly. Delays are integer sample counts, gains are complex.
"""

from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import SimulationError
from ..utils.random_utils import STREAM_SCENE, SeedLike, make_rng

MAX_DELAY_DRAWS = 1000


def gain_from_db(gain_db: float, phase: float = 0.0) -> complex:
    """Complex gain with power ``gain_db`` (dB) and ``phase`` (radians)."""
    return complex(10.0 ** (gain_db / 20.0) * np.exp(1j * phase))


def has_coherent_echoes(delays: Sequence[int], k: int) -> bool:
    """True when two RIS echoes, or a RIS echo and a direct path, reach the PR with the same delay.

    ``delays`` is laid out as drawn by :meth:`Scene.random`: AP to target, target
    to RIS and target to PR delays (K each), then AP to RIS, RIS to PR and AP to PR.
    Echoes sharing a delay carry the same waveform samples and merge into one
    signal direction, which splits their spectrum peak between them.
    """
    delays = [int(d) for d in delays]
    ap_target, target_ris, target_pr = delays[:k], delays[k : 2 * k], delays[2 * k : 3 * k]
    ap_ris, ris_pr, ap_pr = delays[3 * k :]

    cascaded = [a + r + ris_pr for a, r in zip(ap_target, target_ris)] + [ap_ris + ris_pr]
    direct = {a + p for a, p in zip(ap_target, target_pr)} | {ap_pr}
    return len(set(cascaded)) < len(cascaded) or bool(direct & set(cascaded))


class Scene(BaseModel):
    """Full ground truth of one scene: angles (degrees), delays (samples), gains and noise level."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=16, ge=1, description="RIS element count")
    n_pr: int = Field(default=8, ge=1, description="Passive radar antenna count")
    spacing: float = Field(default=0.5, gt=0.0, description="Element spacing of both ULAs in wavelengths")

    theta_ris: list[float] = Field(default_factory=list, description="Target angles seen from the RIS")
    theta_pr: list[float] = Field(default_factory=list, description="Target angles seen from the PR")
    theta_ap_ris: float = Field(default=-10.0, description="AP angle seen from the RIS")
    theta_ris_pr: float = Field(default=-40.0, description="RIS angle seen from the PR")
    theta_ap_pr: float = Field(default=60.0, description="AP angle seen from the PR")

    tau_ap_target: list[int] = Field(default_factory=list, description="AP to target k delays")
    tau_target_ris: list[int] = Field(default_factory=list, description="Target k to RIS delays")
    tau_target_pr: list[int] = Field(default_factory=list, description="Target k to PR delays")
    tau_ap_ris: int = Field(default=0, ge=0, description="AP to RIS delay")
    tau_ris_pr: int = Field(default=0, ge=0, description="RIS to PR delay")
    tau_ap_pr: int = Field(default=0, ge=0, description="AP to PR delay")

    alpha_0: complex = Field(default=1.0 + 0j, description="AP to RIS gain")
    alpha: list[complex] = Field(default_factory=list, description="AP to target k to RIS gains")
    rho: list[complex] = Field(default_factory=list, description="AP to target k to PR gains")
    rho_ap_pr: complex = Field(default=1.0 + 0j, description="AP to PR gain")
    rho_ris_pr: complex = Field(default=1.0 + 0j, description="RIS to PR gain")

    noise_power: float = Field(default=0.0, ge=0.0, description="Per-entry variance of the PR noise")
    seed: int | None = Field(default=None, description="Seed the scene was drawn with, if any")

    @model_validator(mode="after")
    def _check_consistency(self) -> "Scene":
        k = len(self.theta_ris)
        per_target = {
            "theta_pr": self.theta_pr,
            "tau_ap_target": self.tau_ap_target,
            "tau_target_ris": self.tau_target_ris,
            "tau_target_pr": self.tau_target_pr,
            "alpha": self.alpha,
            "rho": self.rho,
        }
        for name, values in per_target.items():
            if len(values) != k:
                raise ValueError(f"{name} has {len(values)} entries, expected K = {k}")

        angles = [*self.theta_ris, *self.theta_pr, self.theta_ap_ris, self.theta_ris_pr, self.theta_ap_pr]
        if any(not np.isfinite(a) or abs(a) > 90.0 for a in angles):
            raise ValueError("All angles must be finite and within [-90, 90] degrees")

        delays = [*self.tau_ap_target, *self.tau_target_ris, *self.tau_target_pr]
        if any(d < 0 for d in delays):
            raise ValueError("Delays must be non-negative")
        return self

    @property
    def k(self) -> int:
        return len(self.theta_ris)

    @property
    def ris_incident_delay(self) -> int:
        """Longest delay among the terms impinging on the RIS."""
        paths = [a + r for a, r in zip(self.tau_ap_target, self.tau_target_ris)]
        return max([self.tau_ap_ris, *paths])

    @property
    def max_delay(self) -> int:
        """Longest total delay of any path reaching the PR."""
        direct = [a + p for a, p in zip(self.tau_ap_target, self.tau_target_pr)]
        return max([self.ris_incident_delay + self.tau_ris_pr, self.tau_ap_pr, *direct])

    def with_noise(self, noise_power: float) -> "Scene":
        return self.model_copy(update={"noise_power": float(noise_power)})

    def without_ris_path(self) -> "Scene":
        """Same scene with the RIS to PR link removed (no-RIS baseline)."""
        return self.model_copy(update={"rho_ris_pr": 0j})

    def scaled(self, factor: complex) -> "Scene":
        """Scene whose every path to the PR carries ``factor`` once.

        The RIS paths are scaled on the RIS side (``alpha_0``, ``alpha``) and
        ``rho_ris_pr`` is left alone, so the noiseless PR data scales by ``factor``.
        """
        return self.model_copy(
            update={
                "alpha_0": self.alpha_0 * factor,
                "alpha": [g * factor for g in self.alpha],
                "rho": [g * factor for g in self.rho],
                "rho_ap_pr": self.rho_ap_pr * factor,
            }
        )

    @classmethod
    def random(
        cls,
        targets: Sequence[float],
        *,
        seed: SeedLike,
        targets_pr: Sequence[float] | None = None,
        m: int = 16,
        n_pr: int = 8,
        spacing: float = 0.5,
        theta_ap_ris: float = -10.0,
        theta_ris_pr: float = -40.0,
        theta_ap_pr: float = 60.0,
        max_delay: int = 10,
        target_gain_db: float = 0.0,
        ap_ris_gain_db: float = 0.0,
        ris_pr_gain_db: float = 0.0,
        target_pr_gain_db: float = 0.0,
        ap_pr_gain_db: float = 0.0,
        distinct_delays: bool = True,
    ) -> "Scene":
        """Draw delays uniformly in ``[0, max_delay]`` and gain phases uniformly in ``[0, 2 pi)``.

        With ``distinct_delays`` the delay draw is repeated until no two echoes
        reach the PR with the same delay (see :func:`has_coherent_echoes`).
        The draws do not depend on ``m``, so scenes that differ only in RIS size share
        every path parameter.
        """
        k = len(targets)
        rng = make_rng(seed, STREAM_SCENE)

        for _ in range(MAX_DELAY_DRAWS):
            delays = rng.integers(0, max_delay + 1, size=3 * k + 3)
            if not distinct_delays or not has_coherent_echoes(delays, k):
                break
        else:
            raise SimulationError(
                f"No delays in [0, {max_delay}] keep the {k} target echoes apart after {MAX_DELAY_DRAWS} draws; "
                "raise max_delay or disable distinct delays"
            )
        phases = rng.uniform(0.0, 2.0 * np.pi, size=2 * k + 3)

        return cls(
            m=m,
            n_pr=n_pr,
            spacing=spacing,
            theta_ris=list(targets),
            theta_pr=list(targets if targets_pr is None else targets_pr),
            theta_ap_ris=theta_ap_ris,
            theta_ris_pr=theta_ris_pr,
            theta_ap_pr=theta_ap_pr,
            tau_ap_target=delays[:k].tolist(),
            tau_target_ris=delays[k : 2 * k].tolist(),
            tau_target_pr=delays[2 * k : 3 * k].tolist(),
            tau_ap_ris=int(delays[3 * k]),
            tau_ris_pr=int(delays[3 * k + 1]),
            tau_ap_pr=int(delays[3 * k + 2]),
            alpha_0=gain_from_db(ap_ris_gain_db, phases[0]),
            alpha=[gain_from_db(target_gain_db, p) for p in phases[1 : k + 1]],
            rho=[gain_from_db(target_pr_gain_db, p) for p in phases[k + 1 : 2 * k + 1]],
            rho_ap_pr=gain_from_db(ap_pr_gain_db, phases[2 * k + 1]),
            rho_ris_pr=gain_from_db(ris_pr_gain_db, phases[2 * k + 2]),
            seed=None if not isinstance(seed, int) else seed,
        )
