"""
Monte-Carlo sweeps over SNR, target count and angular separation.

Trial ``p`` of sweep point ``i`` runs on seed key ``(seed, i, p)`` for every RIS
size and algorithm, so the compared configurations see identical scenes and
noise. Trials can be farmed out to worker processes; results come back in
submission order.
"""

import logging
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from ..config.settings import Algorithm, ExperimentConfig, SweepKind
from ..utils.io_utils import write_frame
from .experiment import run_trial
from .metrics import TrialResult, detection_probability, error_cdf, mse, success_resolve_percentage

logger = logging.getLogger(__name__)

COLUMNS = ["sweep", "point", "m", "algorithm", "metric", "value", "trials", "config_hash"]


@dataclass(frozen=True)
class SweepPoint:
    value: float
    snr_db: float
    targets: tuple[float, ...]


@dataclass(frozen=True)
class _Task:
    cfg: ExperimentConfig
    snr_db: float
    key: tuple[int, int, int]
    m: int
    targets: tuple[float, ...]
    algorithm: Algorithm


def _run_task(task: _Task) -> TrialResult:
    return run_trial(task.cfg, task.snr_db, task.key, m=task.m, targets=task.targets, algorithm=task.algorithm)


@dataclass
class SweepTable:
    """Long-format metric table, one row per (sweep point, configuration, metric)."""

    sweep: SweepKind
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def add(self, point: float, m: int, algorithm: Algorithm, metric: str, value: float, trials: int, config_hash: str):
        self.rows.append(
            {
                "sweep": self.sweep.value,
                "point": point,
                "m": m,
                "algorithm": algorithm.value,
                "metric": metric,
                "value": value,
                "trials": trials,
                "config_hash": config_hash,
            }
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=COLUMNS)

    def to_csv(self, path: Optional[str | Path] = None) -> str:
        return write_frame(self.to_frame(), path)

    def curve(self, metric: str, m: int, algorithm: Algorithm | str = Algorithm.BATCH) -> pd.Series:
        """Metric values indexed by sweep point for one configuration."""
        frame = self.to_frame()
        selected = frame[
            (frame["metric"] == metric) & (frame["m"] == m) & (frame["algorithm"] == Algorithm(algorithm).value)
        ]
        return selected.set_index("point")["value"]


def sweep_points(cfg: ExperimentConfig, sweep: SweepKind) -> List[SweepPoint]:
    first = cfg.targets[0]
    if sweep is SweepKind.SNR:
        return [SweepPoint(snr, snr, tuple(cfg.targets)) for snr in cfg.snr_db]
    if sweep is SweepKind.TARGETS:
        return [
            SweepPoint(k, cfg.targets_snr_db, tuple(first + j * cfg.target_spacing for j in range(k)))
            for k in cfg.target_counts
        ]
    return [SweepPoint(delta, cfg.separation_snr_db, (first, first + delta)) for delta in cfg.separations]


def sweep_algorithms(cfg: ExperimentConfig, sweep: SweepKind) -> List[Algorithm]:
    if sweep is SweepKind.SEPARATION:
        return [Algorithm.BATCH, Algorithm.SEQUENTIAL]
    return [cfg.algorithm]


def sweep_m_values(cfg: ExperimentConfig) -> List[int]:
    """Configured RIS sizes, with the M = 0 baseline appended when it is missing."""
    m_values = list(cfg.m_values)
    if 0 not in m_values:
        logger.warning("m_values %s has no M = 0 entry, adding the no-RIS baseline", m_values)
        m_values.append(0)
    return m_values


def run_sweep(
    cfg: ExperimentConfig,
    sweep: SweepKind | str,
    progress: Optional[Callable[[int], None]] = None,
) -> SweepTable:
    """Run ``cfg.trials`` trials per sweep point, RIS size and algorithm, and tabulate every metric.

    The M = 0 baseline always runs. The ``trials`` column counts the trials behind
    each value, which for ``mse`` are only the correctly enumerated ones.
    ``progress`` is called with 1 after each finished trial.
    """
    sweep = SweepKind(sweep)
    points = sweep_points(cfg, sweep)
    algorithms = sweep_algorithms(cfg, sweep)
    m_values = sweep_m_values(cfg)
    config_hash = cfg.fingerprint()

    groups = []
    tasks: List[_Task] = []
    for i, point in enumerate(points):
        for algorithm in algorithms:
            for m in m_values:
                groups.append((point, m, algorithm, len(tasks)))
                tasks += [
                    _Task(cfg, point.snr_db, (cfg.seed, i, p), m, point.targets, algorithm) for p in range(cfg.trials)
                ]

    logger.info("Running %s sweep: %d points, %d trials on %d worker(s)", sweep.value, len(points), len(tasks), cfg.workers)

    results: List[TrialResult] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for result in pool.map(_run_task, tasks, chunksize=max(1, cfg.trials // cfg.workers)):
                results.append(result)
                if progress:
                    progress(1)
    else:
        for task in tasks:
            results.append(_run_task(task))
            if progress:
                progress(1)

    table = SweepTable(sweep=sweep)
    for point, m, algorithm, start in groups:
        trials = results[start : start + cfg.trials]
        metrics = {
            "mse": mse(trials),
            "p_d": detection_probability(trials),
            "srp": success_resolve_percentage(trials),
        }
        for e, value in zip(cfg.cdf_errors, error_cdf(trials, cfg.cdf_errors)):
            metrics[f"cdf_lt_{e:g}"] = value
        # MSE only averages the correctly enumerated trials
        counts = {"mse": sum(t.correct_enumeration for t in trials)}
        for name, value in metrics.items():
            table.add(point.value, m, algorithm, name, value, counts.get(name, cfg.trials), config_hash)

    return table
