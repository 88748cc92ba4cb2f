"""Configuration module for scramblesim."""

from scramblesim.config.settings import SimulationConfig
from scramblesim.config.experiment import ExperimentConfig
from scramblesim.config.defaults import (
    DEFAULT_SAMPLER,
    DEFAULT_NUM_SAMPLES,
    DEFAULT_INITIAL_STATES,
    DEFAULT_T_INFINITY,
    DEFAULT_MAX_SECTOR_DIM,
)

__all__ = [
    "SimulationConfig",
    "ExperimentConfig",
    "DEFAULT_SAMPLER",
    "DEFAULT_NUM_SAMPLES",
    "DEFAULT_INITIAL_STATES",
    "DEFAULT_T_INFINITY",
    "DEFAULT_MAX_SECTOR_DIM",
]
