"""Engine configuration settings for scramblesim."""

import copy
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from scramblesim.config.defaults import (
    DEFAULT_CHAIN_RULE_METHOD,
    DEFAULT_EXACT_DISTRIBUTION_CAP,
    DEFAULT_JACKKNIFE_BLOCKS,
    DEFAULT_LOG_FORMAT,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_SECTOR_DIM,
    DEFAULT_MAX_SKIP_FRACTION,
    DEFAULT_SAMPLER,
    DEFAULT_T_INFINITY,
    DEFAULT_THREADS,
    SUPPORTED_CHAIN_RULE_METHODS,
    SUPPORTED_LOG_FORMATS,
    SUPPORTED_LOG_LEVELS,
    SUPPORTED_SAMPLERS,
)
from scramblesim.exceptions.errors import ConfigurationError


def _as_bool(value: str) -> bool:
    return value.lower() in ("1", "true", "yes")


@dataclass
class SimulationConfig:
    """
    Engine configuration shared by the pipeline, simulator and CLI.

    Configuration can be loaded from:
        1. Constructor arguments
        2. YAML configuration file
        3. Environment variables (prefixed with SCRAMBLESIM_)

    Environment variables are applied last, so a set SCRAMBLESIM_* variable
    overrides both file values and constructor arguments. Per-run values
    such as CLI flags go through :meth:`with_overrides` and beat both.

    Attributes:
        sampler: Sampling backend ("chain_rule", "dpp" or "exact")
        chain_rule_method: Conditional-weight path of the chain-rule sampler
        threads: Worker threads used for sample batches
        jackknife_blocks: Number of jackknife blocks for standard errors
        max_skip_fraction: Abort threshold for degenerate samples
        t_infinity: Time used as the t -> infinity reference
        average_t_infinity: Average the reference over log-spaced times
        max_sector_dim: Dense exact-diagonalization dimension cap
        exact_distribution_cap: Largest sector enumerated by the oracle
        show_progress: Show tqdm progress bars
        log_level: structlog level name
        log_format: "console" or "json"
    """

    # Sampling settings
    sampler: str = DEFAULT_SAMPLER
    chain_rule_method: str = DEFAULT_CHAIN_RULE_METHOD
    threads: int = DEFAULT_THREADS

    # Estimator settings
    jackknife_blocks: int = DEFAULT_JACKKNIFE_BLOCKS
    max_skip_fraction: float = DEFAULT_MAX_SKIP_FRACTION

    # Long-time reference
    t_infinity: float = DEFAULT_T_INFINITY
    average_t_infinity: bool = False

    # Exact engine caps
    max_sector_dim: int = DEFAULT_MAX_SECTOR_DIM
    exact_distribution_cap: int = DEFAULT_EXACT_DISTRIBUTION_CAP

    # Output settings
    show_progress: bool = False
    log_level: str = DEFAULT_LOG_LEVEL
    log_format: str = DEFAULT_LOG_FORMAT

    # Extra metadata
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate and finalize configuration."""
        self._load_from_env()
        self._validate()

    def _load_from_env(self) -> None:
        """Load configuration from environment variables."""
        env_mappings = {
            "SCRAMBLESIM_SAMPLER": "sampler",
            "SCRAMBLESIM_CHAIN_RULE_METHOD": "chain_rule_method",
            "SCRAMBLESIM_THREADS": ("threads", int),
            "SCRAMBLESIM_JACKKNIFE_BLOCKS": ("jackknife_blocks", int),
            "SCRAMBLESIM_MAX_SKIP_FRACTION": ("max_skip_fraction", float),
            "SCRAMBLESIM_T_INFINITY": ("t_infinity", float),
            "SCRAMBLESIM_AVERAGE_T_INFINITY": ("average_t_infinity", _as_bool),
            "SCRAMBLESIM_MAX_SECTOR_DIM": ("max_sector_dim", int),
            "SCRAMBLESIM_SHOW_PROGRESS": ("show_progress", _as_bool),
            "SCRAMBLESIM_LOG_LEVEL": "log_level",
            "SCRAMBLESIM_LOG_FORMAT": "log_format",
        }

        for env_var, mapping in env_mappings.items():
            value = os.environ.get(env_var)
            if value is None:
                continue

            if isinstance(mapping, str):
                setattr(self, mapping, value)
            else:
                attr_name, converter = mapping
                setattr(self, attr_name, converter(value))

    def _validate(self) -> None:
        """Validate configuration values."""
        if self.sampler not in SUPPORTED_SAMPLERS:
            raise ConfigurationError(
                f"Invalid sampler: {self.sampler}. Supported: {SUPPORTED_SAMPLERS}"
            )

        if self.chain_rule_method not in SUPPORTED_CHAIN_RULE_METHODS:
            raise ConfigurationError(
                f"Invalid chain-rule method: {self.chain_rule_method}. "
                f"Supported: {SUPPORTED_CHAIN_RULE_METHODS}"
            )

        if self.log_format not in SUPPORTED_LOG_FORMATS:
            raise ConfigurationError(
                f"Invalid log format: {self.log_format}. "
                f"Supported: {SUPPORTED_LOG_FORMATS}"
            )

        if self.log_level.upper() not in SUPPORTED_LOG_LEVELS:
            raise ConfigurationError(
                f"Invalid log level: {self.log_level}. Supported: {SUPPORTED_LOG_LEVELS}"
            )

        if self.threads < 1:
            raise ConfigurationError("threads must be at least 1")

        if self.jackknife_blocks < 2:
            raise ConfigurationError("jackknife_blocks must be at least 2")

        if not 0 <= self.max_skip_fraction < 1:
            raise ConfigurationError("max_skip_fraction must be in [0, 1)")

        if self.t_infinity <= 0:
            raise ConfigurationError("t_infinity must be positive")

        if self.max_sector_dim < 1 or self.exact_distribution_cap < 1:
            raise ConfigurationError("dimension caps must be positive")

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "SimulationConfig":
        """Load configuration from YAML file."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path) as f:
            data = yaml.safe_load(f) or {}

        # Flatten nested config
        flat_config: Dict[str, Any] = {}

        if "sampling" in data:
            flat_config["sampler"] = data["sampling"].get("backend")
            flat_config["chain_rule_method"] = data["sampling"].get("chain_rule_method")
            flat_config["threads"] = data["sampling"].get("threads")

        if "estimator" in data:
            flat_config["jackknife_blocks"] = data["estimator"].get("jackknife_blocks")
            flat_config["max_skip_fraction"] = data["estimator"].get(
                "max_skip_fraction"
            )
            flat_config["t_infinity"] = data["estimator"].get("t_infinity")
            flat_config["average_t_infinity"] = data["estimator"].get(
                "average_t_infinity"
            )

        if "exact" in data:
            flat_config["max_sector_dim"] = data["exact"].get("max_sector_dim")
            flat_config["exact_distribution_cap"] = data["exact"].get(
                "exact_distribution_cap"
            )

        if "logging" in data:
            flat_config["log_level"] = data["logging"].get("level")
            flat_config["log_format"] = data["logging"].get("format")
            flat_config["show_progress"] = data["logging"].get("progress")

        # Remove None values
        flat_config = {k: v for k, v in flat_config.items() if v is not None}

        return cls(**flat_config)

    def with_overrides(self, **overrides: Any) -> "SimulationConfig":
        """
        Copy with explicit values applied on top of this configuration.

        Unlike ``dataclasses.replace`` the copy does not read the environment
        again, so explicit values win over SCRAMBLESIM_* variables. None
        values are ignored.

        Raises:
            ConfigurationError: If an override is unknown or invalid
        """
        updated = copy.copy(self)
        updated.metadata = dict(self.metadata)
        for name, value in overrides.items():
            if value is None:
                continue
            if name not in self.__dataclass_fields__:
                raise ConfigurationError(f"Unknown setting: {name}")
            setattr(updated, name, value)
        updated._validate()
        return updated

    def to_yaml(self, path: Union[str, Path]) -> None:
        """Save configuration to YAML file."""
        data = {
            "sampling": {
                "backend": self.sampler,
                "chain_rule_method": self.chain_rule_method,
                "threads": self.threads,
            },
            "estimator": {
                "jackknife_blocks": self.jackknife_blocks,
                "max_skip_fraction": self.max_skip_fraction,
                "t_infinity": self.t_infinity,
                "average_t_infinity": self.average_t_infinity,
            },
            "exact": {
                "max_sector_dim": self.max_sector_dim,
                "exact_distribution_cap": self.exact_distribution_cap,
            },
            "logging": {
                "level": self.log_level,
                "format": self.log_format,
                "progress": self.show_progress,
            },
        }

        with open(path, "w") as f:
            yaml.dump(data, f, default_flow_style=False)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "sampler": self.sampler,
            "chain_rule_method": self.chain_rule_method,
            "threads": self.threads,
            "jackknife_blocks": self.jackknife_blocks,
            "max_skip_fraction": self.max_skip_fraction,
            "t_infinity": self.t_infinity,
            "average_t_infinity": self.average_t_infinity,
            "max_sector_dim": self.max_sector_dim,
            "exact_distribution_cap": self.exact_distribution_cap,
            "show_progress": self.show_progress,
            "log_level": self.log_level,
            "log_format": self.log_format,
        }
