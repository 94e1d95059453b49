"""
Plain-text scene files.

One ``key="value"`` per line, keys named after the :class:`Scene` fields.
Angles are in degrees, delays in samples, lists are comma-separated and every
complex gain is written as ``"<magnitude> <phase in degrees>"``.
"""

import logging
from pathlib import Path

import numpy as np
from dotenv import dotenv_values
from pydantic import ValidationError

from ..exceptions import ConfigurationError
from .scene import Scene

logger = logging.getLogger(__name__)

GAIN_FIELDS = ("alpha_0", "rho_ap_pr", "rho_ris_pr")
GAIN_LIST_FIELDS = ("alpha", "rho")
LIST_FIELDS = ("theta_ris", "theta_pr", "tau_ap_target", "tau_target_ris", "tau_target_pr")


def _format_gain(gain: complex) -> str:
    return f"{abs(gain):.17g} {np.degrees(np.angle(gain)):.17g}"


def _parse_gain(text: str) -> complex:
    parts = text.split()
    if len(parts) != 2:
        raise ConfigurationError(f"Gain must be '<magnitude> <phase_deg>', got {text!r}")
    magnitude, phase_deg = (float(p) for p in parts)
    return complex(magnitude * np.exp(1j * np.radians(phase_deg)))


def _split(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def save_scene(scene: Scene, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    lines = ["# RIS passive radar scene"]
    for key, value in scene.model_dump().items():
        if value is None:
            continue
        if key in GAIN_FIELDS:
            text = _format_gain(value)
        elif key in GAIN_LIST_FIELDS:
            text = ", ".join(_format_gain(g) for g in value)
        elif key in LIST_FIELDS:
            text = ", ".join(repr(v) for v in value)
        else:
            text = repr(value)
        lines.append(f'{key}="{text}"')

    path.write_text("\n".join(lines) + "\n")
    logger.debug("Saved %d-target scene to %s", scene.k, path)
    return path


def load_scene(path: str | Path) -> Scene:
    """Read a scene file written by :func:`save_scene` (or by hand)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scene file not found: {path}")

    data: dict = {}
    try:
        for key, text in dotenv_values(path).items():
            key = key.strip().lower()
            if text is None:
                continue
            if key in GAIN_FIELDS:
                data[key] = _parse_gain(text)
            elif key in GAIN_LIST_FIELDS:
                data[key] = [_parse_gain(item) for item in _split(text)]
            elif key in LIST_FIELDS:
                data[key] = _split(text)
            else:
                data[key] = text
        return Scene(**data)
    except (ValidationError, ValueError) as e:
        raise ConfigurationError(f"Invalid scene file {path}: {e}") from e
