"""
Configuration management for the RIS passive radar toolkit.
"""

import hashlib
import json
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

from ..arrays.manifold import AngleGrid
from ..simulation.waveform import WaveformKind

# Load environment variables
load_dotenv()

ENV_PREFIX = "RIS_"
NESTED_SECTIONS = ("nlms", "logging")


class Algorithm(str, Enum):
    BATCH = "batch"
    SEQUENTIAL = "sequential"


class SweepKind(str, Enum):
    SNR = "snr"
    TARGETS = "targets"
    SEPARATION = "separation"


class NlmsConfig(BaseModel):
    """NLMS estimator configuration."""

    mu: float = Field(default=0.1, gt=0.0, description="NLMS step size")
    grid_start: float = Field(default=-90.0, ge=-90.0, le=90.0, description="First grid angle in degrees")
    grid_stop: float = Field(default=90.0, ge=-90.0, le=90.0, description="Last grid angle in degrees")
    grid_step: float = Field(default=0.5, gt=0.0, description="Grid step in degrees")
    peak_threshold: float = Field(default=0.5, gt=0.0, lt=1.0, description="Detection threshold on the normalized spectrum")
    epsilon_norm: float = Field(default=1e-12, gt=0.0, description="Regularizer added to every normalization")
    normalize_input: bool = Field(default=True, description="Divide Z by its RMS snapshot norm before adapting")

    @model_validator(mode="after")
    def _check_grid(self) -> "NlmsConfig":
        AngleGrid(self.grid_start, self.grid_stop, self.grid_step)
        return self

    @property
    def grid(self) -> AngleGrid:
        return AngleGrid(self.grid_start, self.grid_stop, self.grid_step)


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = Field(default="INFO", description="Logging level")
    rich_tracebacks: bool = Field(default=True, description="Render tracebacks with rich")

    @field_validator("level")
    @classmethod
    def _check_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown logging level: {v}")
        return level


def _split_list(v: Any) -> Any:
    if isinstance(v, str):
        return [item.strip() for item in v.split(",") if item.strip()]
    return v


class ExperimentConfig(BaseModel):
    """Complete experiment configuration: scene, array sizes, sweeps and estimator."""

    # Scene geometry (degrees)
    theta_ap_ris: float = Field(default=-10.0, ge=-90.0, le=90.0, description="AP angle seen from the RIS")
    theta_ris_pr: float = Field(default=-40.0, ge=-90.0, le=90.0, description="RIS angle seen from the PR")
    theta_ap_pr: float = Field(default=60.0, ge=-90.0, le=90.0, description="AP angle seen from the PR")
    targets: List[float] = Field(default=[20.0, 30.0], description="Target angles seen from the RIS")
    target_pr_offset: float = Field(default=0.0, description="Offset of the PR-side target angles")

    # Path gains (dB) and delays
    target_gain_db: float = Field(default=0.0, description="AP to target to RIS gain")
    ap_ris_gain_db: float = Field(default=0.0, description="AP to RIS gain")
    ris_pr_gain_db: float = Field(default=0.0, description="RIS to PR gain")
    target_pr_gain_db: float = Field(default=0.0, description="AP to target to PR gain")
    ap_pr_gain_db: float = Field(default=-10.0, description="AP to PR gain")
    max_delay: int = Field(default=10, ge=0, description="Largest per-hop delay in samples")
    distinct_delays: bool = Field(default=True, description="Redraw delays until no two echoes share a delay at the PR")
    waveform: WaveformKind = Field(default=WaveformKind.QPSK, description="AP waveform")
    spacing: float = Field(default=0.5, gt=0.0, description="Element spacing in wavelengths")

    # Arrays and campaign
    m: int = Field(default=64, ge=0, description="RIS elements for single runs (0 = no-RIS baseline)")
    m_values: List[int] = Field(default=[16, 32, 0], description="RIS sizes compared by the sweeps")
    n_epoch: int = Field(default=100, ge=1, description="RIS configurations per campaign")
    l_snapshots: int = Field(default=100, ge=1, description="Snapshots per epoch")
    n_pr: int = Field(default=8, ge=1, description="Passive radar antennas")

    # Sweeps
    snr_db: List[float] = Field(default=[float(s) for s in range(-30, 21, 2)], description="SNR sweep points")
    spectrum_snr_db: float = Field(default=10.0, description="SNR of single spectrum runs")
    target_counts: List[int] = Field(default=[1, 2, 3, 4, 5, 6], description="Target counts of the K sweep")
    target_spacing: float = Field(default=5.0, gt=0.0, description="Spacing of targets in the K sweep")
    targets_snr_db: float = Field(default=0.0, description="SNR of the K sweep")
    separations: List[float] = Field(
        default=[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 12.0], description="Separation sweep points"
    )
    separation_snr_db: float = Field(default=20.0, description="SNR of the separation sweep")
    cdf_errors: List[float] = Field(default=[0.25, 0.5, 1.0, 2.0, 5.0], description="CDF thresholds in degrees")

    # Monte-Carlo
    trials: int = Field(default=200, ge=1, description="Trials per sweep point")
    seed: int = Field(default=0, ge=0, description="Master seed")
    algorithm: Algorithm = Field(default=Algorithm.BATCH, description="NLMS variant")
    workers: int = Field(default=1, ge=1, description="Worker processes for trials")

    # Files
    output_path: Optional[str] = Field(default=None, description="CSV output path (stdout when unset)")
    scene_file: Optional[str] = Field(default=None, description="Scene file overriding the random scene")

    nlms: NlmsConfig = Field(default_factory=NlmsConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("targets", "m_values", "snr_db", "target_counts", "separations", "cdf_errors", mode="before")
    @classmethod
    def _parse_lists(cls, v):
        return _split_list(v)

    @field_validator("output_path", "scene_file", mode="before")
    @classmethod
    def _empty_is_none(cls, v):
        return v or None

    @model_validator(mode="after")
    def _check_lists(self) -> "ExperimentConfig":
        for name in ("targets", "m_values", "snr_db", "target_counts", "separations", "cdf_errors"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        if any(m < 0 for m in self.m_values):
            raise ValueError("m_values must be non-negative")
        if any(k < 1 for k in self.target_counts):
            raise ValueError("target_counts must be positive")
        if any(e <= 0 for e in self.cdf_errors):
            raise ValueError("cdf_errors must be positive")
        return self

    @property
    def targets_pr(self) -> List[float]:
        return [theta + self.target_pr_offset for theta in self.targets]

    def fingerprint(self) -> str:
        """Short hash of every setting that changes results."""
        payload = self.model_dump_json(exclude={"workers", "output_path", "logging"})
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    @classmethod
    def _from_flat(cls, values: Dict[str, Optional[str]]) -> "ExperimentConfig":
        config_data: Dict[str, Any] = {}
        for key, value in values.items():
            key = key.strip().lower()
            if value is None:
                continue
            section = next((s for s in NESTED_SECTIONS if key.startswith(f"{s}_")), None)
            if section:
                config_data.setdefault(section, {})[key[len(section) + 1 :]] = value
            else:
                config_data[key] = value
        return cls(**config_data)

    @classmethod
    def from_env(cls) -> "ExperimentConfig":
        """Create configuration from ``RIS_*`` environment variables."""
        values = {k[len(ENV_PREFIX) :]: v for k, v in os.environ.items() if k.startswith(ENV_PREFIX)}
        return cls._from_flat(values)

    @classmethod
    def from_file(cls, config_path: str) -> "ExperimentConfig":
        """Load configuration from a JSON file or a key-value file."""
        config_file = Path(config_path)
        if not config_file.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        if config_file.suffix == ".json":
            with open(config_file, "r") as f:
                return cls(**json.load(f))
        return cls._from_flat(dotenv_values(config_file))

    def to_file(self, config_path: str):
        """Save configuration; ``.json`` paths get JSON, anything else key-value lines."""
        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)
        config_data = self.model_dump(mode="json")

        if config_file.suffix == ".json":
            with open(config_file, "w") as f:
                json.dump(config_data, f, indent=2)
            return

        lines = ["# RIS passive radar experiment configuration"]
        for key, value in config_data.items():
            if key in NESTED_SECTIONS:
                lines += [f'{key}_{k}="{_format_value(v)}"' for k, v in value.items()]
            elif value is not None:
                lines.append(f'{key}="{_format_value(value)}"')
        config_file.write_text("\n".join(lines) + "\n")

    def validate_config(self) -> Dict[str, List[str]]:
        """Validate configuration and return any issues."""
        issues = {"errors": [], "warnings": []}

        if self.scene_file and not Path(self.scene_file).exists():
            issues["errors"].append(f"Scene file not found: {self.scene_file}")

        if self.output_path:
            out_dir = Path(self.output_path).parent
            try:
                out_dir.mkdir(parents=True, exist_ok=True)
                test_file = out_dir / ".test_write"
                test_file.write_text("test")
                test_file.unlink()
            except Exception as e:
                issues["errors"].append(f"Cannot write to output directory ({out_dir}): {e}")

        grid = self.nlms.grid
        outside = [t for t in [*self.targets, *self.targets_pr] if not grid.start <= t <= grid.stop]
        if outside:
            issues["errors"].append(f"Targets outside the search grid: {outside}")

        if self.trials < 50:
            issues["warnings"].append(f"Only {self.trials} trials per point, metrics will be noisy")
        if not self.nlms.normalize_input and self.nlms.mu >= 0.5:
            issues["warnings"].append("Batch NLMS may diverge on unnormalized input with mu >= 0.5")
        if 0 in self.m_values and self.n_pr < 2:
            issues["warnings"].append("No-RIS baseline with a single PR antenna cannot resolve angles")

        return issues


def _format_value(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(str(v) for v in value)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


# Global configuration instance
_config: Optional[ExperimentConfig] = None


def get_config() -> ExperimentConfig:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = ExperimentConfig.from_env()
    return _config


def set_config(config: ExperimentConfig):
    """Set the global configuration instance."""
    global _config
    _config = config


def load_config_from_file(config_path: str) -> ExperimentConfig:
    """Load and set configuration from file."""
    config = ExperimentConfig.from_file(config_path)
    set_config(config)
    return config


def create_default_config_file(config_path: str = "config.json"):
    """Create a default configuration file."""
    default_config = ExperimentConfig()
    default_config.to_file(config_path)
    return config_path
