"""Gravitational charge-separation simulator and circular Rydberg-atom calculators."""

__version__ = "0.1.0"

from .constants import PhysicalConstants, default_constants
from .config import ConfigError, ExperimentConfig, load_config, render_config

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "PhysicalConstants",
    "default_constants",
    "load_config",
    "render_config",
    "__version__",
]
