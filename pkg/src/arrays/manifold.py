"""
Array manifold of uniform linear arrays (RIS and passive radar).

Angles are in degrees at every public interface. Element ``m`` (0-based) of a
steering vector is ``exp(j * 2 * pi * d * m * sin(theta))`` with ``d`` the
element spacing in wavelengths and element 0 as the phase reference.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SPACING = 0.5


@dataclass(frozen=True)
class AngleGrid:
    """Ordered angular search grid in degrees, spanning ``[start, stop]``."""

    start: float = -90.0
    stop: float = 90.0
    step: float = 0.5
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and math.isfinite(self.step)):
            raise ValueError("Grid bounds and step must be finite")
        if self.start >= self.stop:
            raise ValueError(f"Grid start ({self.start}) must be below stop ({self.stop})")
        if self.step <= 0:
            raise ValueError(f"Grid step must be positive, got {self.step}")
        if self.start < -90.0 or self.stop > 90.0:
            raise ValueError("Grid must lie within [-90, 90] degrees")

        intervals = (self.stop - self.start) / self.step
        n_intervals = round(intervals)
        if abs(intervals - n_intervals) > 1e-9 * max(1.0, intervals):
            raise ValueError(f"Step {self.step} does not divide [{self.start}, {self.stop}]")

        values = self.start + self.step * np.arange(n_intervals + 1, dtype=float)
        values[-1] = self.stop
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def nearest_index(self, angle: float) -> int:
        """Index of the grid point closest to ``angle``."""
        return int(np.argmin(np.abs(self.values - angle)))


@dataclass(frozen=True, eq=False)
class SteeringVector:
    """Response of an ``N``-element ULA to a unit plane wave from ``angle``."""

    angle: float
    elements: np.ndarray

    @property
    def n_elements(self) -> int:
        return self.elements.size

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.elements, self.elements).real)


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"Angle must be finite, got {theta}")
    if abs(theta) > 90.0:
        raise ValueError(f"Angle must lie within [-90, 90] degrees, got {theta}")
    return theta


def steering_vector(
    theta: float, n_elements: int, spacing_wavelengths: float = DEFAULT_SPACING
) -> SteeringVector:
    """Steering vector of a ULA towards ``theta`` degrees."""
    theta = _check_angle(theta)
    if n_elements < 1:
        raise ValueError(f"Array needs at least one element, got {n_elements}")

    phase = 2.0 * np.pi * spacing_wavelengths * np.arange(n_elements) * np.sin(np.deg2rad(theta))
    elements = np.exp(1j * phase)
    elements.flags.writeable = False
    return SteeringVector(angle=theta, elements=elements)


def steering_matrix(
    angles: Sequence[float] | np.ndarray, n_elements: int, spacing_wavelengths: float = DEFAULT_SPACING
) -> np.ndarray:
    """Array manifold ``[a(angles[0]) ... a(angles[K-1])]`` of shape ``(n_elements, K)``."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if angles.size == 0:
        raise ValueError("Steering matrix needs at least one angle")

    # Built column by column so each column is bitwise equal to steering_vector().
    return np.column_stack(
        [steering_vector(theta, n_elements, spacing_wavelengths).elements for theta in angles]
    )
