"""
Exception hierarchy for the RIS passive radar toolkit.
"""


class RadarToolkitError(ValueError):
    """Base class for all toolkit errors."""


class DimensionError(RadarToolkitError):
    """Array shapes of two inputs do not agree."""


class SimulationError(RadarToolkitError):
    """A scene or waveform cannot produce the requested samples."""


class NoDetectableEnergyError(RadarToolkitError):
    """A spectrum carries no energy, so it cannot be normalized."""


class ConfigurationError(RadarToolkitError):
    """Configuration file is missing keys or holds values that cannot be parsed."""


class DivergenceError(RadarToolkitError):
    """An adaptive recursion left the floating point range."""
