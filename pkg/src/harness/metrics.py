"""
Scoring of detections against the truth and Monte-Carlo metrics.

Estimates are associated to true angles greedily, closest pair first. Ties
go to the smaller true angle, then to the smaller estimate.
"""

import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..estimators.spectrum import Detection

# Slack on the half-grid-step test, so that an estimate exactly half a step off still counts.
RESOLUTION_SLACK = 1e-9


class TrialResult(BaseModel):
    """Outcome of one Monte-Carlo trial."""

    true_angles: list[float] = Field(description="True angles in degrees")
    detected: Detection = Field(description="Estimator output")
    matched: list[tuple[float, float]] = Field(default_factory=list, description="(truth, estimate) pairs")
    squared_errors: list[float] = Field(default_factory=list, description="Squared error of every matched pair")
    correct_enumeration: bool = Field(description="Detected count equals the true count")
    exact_recovery: bool = Field(description="Correct count and every error within half a grid step")
    m: int = Field(default=0, description="RIS elements, 0 for the baseline")
    snr_db: float = Field(default=0.0, description="SNR at the passive radar")


def match_angles(truth: Sequence[float], estimates: Sequence[float]) -> list[tuple[float, float]]:
    """Greedy nearest-angle association, returned in ascending truth order."""
    candidates = sorted(
        ((abs(t - e), t, e, i, j) for i, t in enumerate(truth) for j, e in enumerate(estimates)),
        key=lambda c: c[:3],
    )
    used_truth, used_estimates, pairs = set(), set(), []
    for _, t, e, i, j in candidates:
        if i in used_truth or j in used_estimates:
            continue
        used_truth.add(i)
        used_estimates.add(j)
        pairs.append((t, e))
    return sorted(pairs)


def score_trial(
    truth: Sequence[float], detection: Detection, grid_step: float, *, m: int = 0, snr_db: float = 0.0
) -> TrialResult:
    pairs = match_angles(truth, detection.angles)
    squared = [(t - e) ** 2 for t, e in pairs]
    correct = detection.k_hat == len(truth)
    tolerance = grid_step / 2.0 + RESOLUTION_SLACK
    exact = correct and all(abs(t - e) <= tolerance for t, e in pairs)
    return TrialResult(
        true_angles=list(truth),
        detected=detection,
        matched=pairs,
        squared_errors=squared,
        correct_enumeration=correct,
        exact_recovery=exact,
        m=m,
        snr_db=snr_db,
    )


def mse(results: Sequence[TrialResult]) -> float:
    """Mean squared angle error (deg^2) over correctly enumerated trials; NaN if there are none."""
    if not results:
        raise ValueError("MSE needs at least one trial")
    errors = [e for r in results if r.correct_enumeration for e in r.squared_errors]
    if not errors:
        return math.nan
    return float(np.mean(errors))


def detection_probability(results: Sequence[TrialResult]) -> float:
    if not results:
        raise ValueError("Detection probability needs at least one trial")
    return sum(r.correct_enumeration for r in results) / len(results)


def success_resolve_percentage(results: Sequence[TrialResult]) -> float:
    """Fraction of trials recovering every angle at grid resolution."""
    if not results:
        raise ValueError("SRP needs at least one trial")
    return sum(r.exact_recovery for r in results) / len(results)


def absolute_errors(results: Sequence[TrialResult]) -> np.ndarray:
    """Per-target absolute errors; targets left without an estimate count as infinite."""
    errors = []
    for r in results:
        errors += [abs(t - e) for t, e in r.matched]
        errors += [math.inf] * (len(r.true_angles) - len(r.matched))
    return np.asarray(errors, dtype=float)


def error_cdf(results: Sequence[TrialResult], error_grid: Sequence[float]) -> list[float]:
    """Empirical ``Pr(|theta - theta_hat| < e)`` for every ``e`` in ``error_grid``."""
    errors = absolute_errors(results)
    if errors.size == 0:
        return [math.nan] * len(error_grid)
    return [float(np.mean(errors < e)) for e in error_grid]
