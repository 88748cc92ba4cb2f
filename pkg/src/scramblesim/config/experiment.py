"""Experiment description for CLI runs."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from scramblesim.config.defaults import (
    DEFAULT_BETA,
    DEFAULT_INITIAL_STATES,
    DEFAULT_LYAPUNOV_WINDOW,
    DEFAULT_NUM_SAMPLES,
    DEFAULT_OTOC_THRESHOLD,
    DEFAULT_SAMPLER,
    DEFAULT_T_INFINITY,
    DEFAULT_THREADS,
    SUPPORTED_INITIAL_STATES,
    SUPPORTED_OUTPUT_FORMATS,
    SUPPORTED_SAMPLERS,
)
from scramblesim.exceptions.errors import ConfigurationError


class ExperimentConfig(BaseModel):
    """
    One reproducible experiment: sector, time grid, sampling and output.

    The time grid is either an explicit ``t_grid`` list or the tuple
    (``t_min``, ``t_max``, ``t_count``, ``t_spacing``).
    """

    model_config = ConfigDict(extra="forbid")

    L: int = Field(ge=1)
    N: int = Field(ge=0)

    t_grid: Optional[List[float]] = None
    t_min: Optional[float] = None
    t_max: Optional[float] = None
    t_count: Optional[int] = Field(default=None, ge=1)
    t_spacing: str = "linear"

    M_s: int = Field(default=DEFAULT_NUM_SAMPLES, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    threads: int = Field(default=DEFAULT_THREADS, ge=1)
    sampler: str = DEFAULT_SAMPLER

    initial_state: str = "random-product"
    n_initial_states: int = Field(default=DEFAULT_INITIAL_STATES, ge=1)

    output: Optional[str] = None
    format: str = "csv"

    t_infinity: float = Field(default=DEFAULT_T_INFINITY, gt=0)
    average_t_infinity: bool = False
    fit_window: Optional[Tuple[float, float]] = None

    beta: float = Field(default=DEFAULT_BETA, ge=0)
    source_site: Optional[int] = Field(default=None, ge=0)
    threshold: float = Field(default=DEFAULT_OTOC_THRESHOLD, gt=0)
    lyapunov_window: Tuple[float, float] = DEFAULT_LYAPUNOV_WINDOW

    @field_validator("t_spacing")
    @classmethod
    def _check_spacing(cls, value: str) -> str:
        if value not in ("linear", "log"):
            raise ValueError("t_spacing must be 'linear' or 'log'")
        return value

    @field_validator("format")
    @classmethod
    def _check_format(cls, value: str) -> str:
        if value not in SUPPORTED_OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {SUPPORTED_OUTPUT_FORMATS}")
        return value

    @field_validator("sampler")
    @classmethod
    def _check_sampler(cls, value: str) -> str:
        if value not in SUPPORTED_SAMPLERS:
            raise ValueError(f"sampler must be one of {SUPPORTED_SAMPLERS}")
        return value

    @model_validator(mode="after")
    def _check_sector(self) -> "ExperimentConfig":
        if 2 * self.N > self.L + 1:
            raise ValueError(f"N={self.N} exceeds (L+1)/2 for L={self.L}")

        if self.initial_state not in SUPPORTED_INITIAL_STATES:
            bits = self.initial_state
            if set(bits) - {"0", "1"}:
                raise ValueError(
                    "initial_state must be 'ground', 'random-product' "
                    "or a logical bitstring"
                )
            if len(bits) != self.L_tau or bits.count("1") != self.N:
                raise ValueError(
                    f"initial bitstring must have length L_tau={self.L_tau} "
                    f"and {self.N} ones"
                )

        if self.source_site is not None and self.source_site >= self.L:
            raise ValueError(f"source_site must be below L={self.L}")

        return self

    @property
    def L_tau(self) -> int:
        """Logical chain length L + 1 - N."""
        return self.L + 1 - self.N

    @property
    def density(self) -> float:
        return self.N / self.L

    def require_seed(self) -> int:
        """Return the seed, failing for sampling runs without one."""
        if self.seed is None:
            raise ConfigurationError("A seed is mandatory for sampling runs")
        return self.seed

    def time_grid(self) -> np.ndarray:
        """
        Resolve the time grid.

        Raises:
            ValueError: If no grid is given or the grid is empty
        """
        if self.t_grid is not None:
            grid = np.asarray(self.t_grid, dtype=float)
        elif None not in (self.t_min, self.t_max, self.t_count):
            if self.t_spacing == "log":
                if self.t_min <= 0:
                    raise ValueError("log spacing requires t_min > 0")
                grid = np.geomspace(self.t_min, self.t_max, self.t_count)
            else:
                grid = np.linspace(self.t_min, self.t_max, self.t_count)
        else:
            raise ValueError("No time grid given (t_grid or t_min/t_max/t_count)")

        if grid.size == 0:
            raise ValueError("Time grid is empty")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("Time grid must be strictly increasing")
        return grid

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides: Any) -> "ExperimentConfig":
        """Load a JSON or YAML experiment file; non-None overrides win."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path) as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f) or {}
            else:
                data = json.load(f)

        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(data)

    def to_manifest(self) -> Dict[str, Any]:
        """Resolved configuration for run manifests."""
        manifest = self.model_dump()
        try:
            manifest["t_grid"] = self.time_grid().tolist()
        except ValueError:
            manifest["t_grid"] = None
        return manifest
