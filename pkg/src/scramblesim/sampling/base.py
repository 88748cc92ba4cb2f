"""Abstract base class for configuration samplers."""

import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np
import structlog
from tqdm import tqdm

from scramblesim.core.result import SampleBatch
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import NumericalUnderflowError
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.sampling.rng import sample_stream

logger = structlog.get_logger(__name__)


class BaseSampler(ABC):
    """
    Abstract base class for samplers of |Psi_m|^2.

    Subclasses implement a single draw; batching, per-sample random
    streams and the worker pool live here so every backend is
    reproducible from (state, seed, M_s) regardless of thread count.
    """

    def __init__(self, show_progress: bool = False, **kwargs):
        """
        Initialize sampler.

        Args:
            show_progress: Show a tqdm progress bar for batches
            **kwargs: Backend-specific parameters
        """
        self.show_progress = show_progress
        self._logger = logger.bind(component="sampler", backend=self.name)

    @property
    @abstractmethod
    def name(self) -> str:
        """Return the name of the sampler."""
        pass

    @abstractmethod
    def sample_sites(self, state: SlaterState, rng: np.random.Generator) -> np.ndarray:
        """
        Draw one configuration.

        Args:
            state: Slater state to sample from
            rng: Random generator owned by this draw

        Returns:
            Ascending array of N occupied logical sites
        """
        pass

    def sample_one(self, state: SlaterState, rng: np.random.Generator) -> LogicalConfig:
        """Draw one logical configuration with probability |Psi_m|^2."""
        return LogicalConfig.from_sites(self.sample_sites(state, rng), state.L_tau)

    def _draw(self, state: SlaterState, seed: int, index: int) -> np.ndarray:
        try:
            return self.sample_sites(state, sample_stream(seed, index))
        except NumericalUnderflowError as e:
            raise NumericalUnderflowError(
                f"{e.message} (sample {index})", sample_index=index
            ) from e

    def sample_batch(
        self,
        state: SlaterState,
        M_s: int,
        seed: int,
        threads: int = 1,
    ) -> SampleBatch:
        """
        Draw M_s independent samples.

        Sample i uses its own stream keyed by (seed, i) and results are
        assembled by index, so the batch does not depend on ``threads``.

        Args:
            state: Slater state to sample from
            M_s: Number of samples
            seed: Batch seed
            threads: Worker threads

        Returns:
            SampleBatch of M_s configurations

        Raises:
            ValueError: If M_s < 1 or threads < 1
            NumericalUnderflowError: With the failing sample index
        """
        if M_s < 1:
            raise ValueError(f"M_s must be >= 1, got {M_s}")
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")

        start_time = time.time()
        sites = np.empty((M_s, state.N), dtype=np.int64)

        if threads == 1:
            indices = tqdm(range(M_s), disable=not self.show_progress, desc="sampling")
            for index in indices:
                sites[index] = self._draw(state, seed, index)
        else:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                futures = {
                    executor.submit(self._draw, state, seed, index): index
                    for index in range(M_s)
                }
                for future in tqdm(
                    as_completed(futures),
                    total=M_s,
                    disable=not self.show_progress,
                    desc="sampling",
                ):
                    sites[futures[future]] = future.result()

        self._logger.debug(
            "Batch sampled",
            M_s=M_s,
            time=state.time,
            threads=threads,
            elapsed=f"{time.time() - start_time:.3f}s",
        )
        return SampleBatch(
            sites=sites,
            L_tau=state.L_tau,
            seed=seed,
            state_time=state.time,
            sampler=self.name,
        )
