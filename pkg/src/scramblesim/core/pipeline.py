"""Simulation pipeline for one initial Slater state."""

import time
from typing import List, Optional, Sequence

import numpy as np
import structlog

from scramblesim.config.defaults import (
    DEFAULT_T_INFINITY_POINTS,
    DEFAULT_T_INFINITY_WINDOW,
)
from scramblesim.config.settings import SimulationConfig
from scramblesim.core.result import CorrelationMatrix, SampleBatch, ScramblingDiagnostics
from scramblesim.dynamics.hamiltonian import HoppingHamiltonian, build_hamiltonian
from scramblesim.dynamics.slater import SlaterState, evolve
from scramblesim.observables.estimator import correlation_estimate
from scramblesim.observables.orbitals import scrambling_diagnostics
from scramblesim.sampling.base import BaseSampler
from scramblesim.sampling.factory import create_sampler
from scramblesim.sampling.rng import derive_seed
from scramblesim.utils.validators import validate_sector

logger = structlog.get_logger(__name__)

# Stream key of the long-time reference, above any time-grid index.
REFERENCE_KEY = 2**31 - 1


class ScramblingPipeline:
    """
    Evolve, sample and estimate for one sector.

    Pipeline stages:
        1. Evolution - exact single-particle propagation of the orbitals
        2. Sampling - M_s logical configurations from |Psi_m(t)|^2
        3. Estimation - physical correlation matrix with jackknife errors
        4. Diagnostics - natural orbitals, D, chi and Z

    Every batch draws from its own seed derived from
    (run seed, initial-state index, time index).
    """

    def __init__(self, L: int, N: int, config: Optional[SimulationConfig] = None):
        validate_sector(L, N)
        self.L = L
        self.N = N
        self.L_tau = L + 1 - N
        self.config = config or SimulationConfig()
        self._logger = logger.bind(component="pipeline", L=L, N=N)

        self._hamiltonian: Optional[HoppingHamiltonian] = None
        self._sampler: Optional[BaseSampler] = None
        self._initialized = False

    def _ensure_initialized(self) -> None:
        """Lazy initialization of the Hamiltonian and sampler."""
        if self._initialized:
            return

        start_time = time.time()
        self._hamiltonian = build_hamiltonian(self.L_tau)

        kwargs = {}
        if self.config.sampler == "chain_rule":
            kwargs["method"] = self.config.chain_rule_method
        elif self.config.sampler == "exact":
            kwargs["cap"] = self.config.exact_distribution_cap
        self._sampler = create_sampler(
            self.config.sampler, show_progress=self.config.show_progress, **kwargs
        )

        self._initialized = True
        self._logger.info(
            "Pipeline initialized",
            sampler=self._sampler.name,
            init_time=f"{time.time() - start_time:.3f}s",
        )

    @property
    def sampler(self) -> BaseSampler:
        self._ensure_initialized()
        return self._sampler

    def evolve(self, initial: SlaterState, t: float) -> SlaterState:
        """State at absolute time ``t``."""
        self._ensure_initialized()
        return evolve(initial, t - initial.time, self._hamiltonian)

    def sample(self, state: SlaterState, M_s: int, seed: int, *keys: int) -> SampleBatch:
        """Draw a batch with the seed derived from (seed, keys...)."""
        self._ensure_initialized()
        return self._sampler.sample_batch(
            state, M_s, derive_seed(seed, *keys), threads=self.config.threads
        )

    def correlations(
        self,
        initial: SlaterState,
        t: float,
        M_s: int,
        seed: int,
        *keys: int,
    ) -> CorrelationMatrix:
        """Estimated physical correlation matrix at time ``t``."""
        state = self.evolve(initial, t)
        batch = self.sample(state, M_s, seed, *keys)
        return correlation_estimate(
            state,
            batch,
            n_blocks=self.config.jackknife_blocks,
            max_skip_fraction=self.config.max_skip_fraction,
        )

    def reference(
        self,
        initial: SlaterState,
        M_s: int,
        seed: int,
        state_index: int = 0,
    ) -> CorrelationMatrix:
        """
        Long-time reference correlation matrix.

        Uses ``config.t_infinity``, or with ``average_t_infinity`` the mean
        over log-spaced times across the default reference window.
        """
        if not self.config.average_t_infinity:
            return self.correlations(
                initial, self.config.t_infinity, M_s, seed, state_index, REFERENCE_KEY
            )

        times = np.geomspace(*DEFAULT_T_INFINITY_WINDOW, DEFAULT_T_INFINITY_POINTS)
        estimates = [
            self.correlations(initial, t, M_s, seed, state_index, REFERENCE_KEY, point)
            for point, t in enumerate(times)
        ]
        n = len(estimates)
        stderr = np.sqrt(sum(c.stderr**2 for c in estimates)) / n
        replicas = None
        if all(c.replicas is not None for c in estimates):
            count = min(len(c.replicas) for c in estimates)
            replicas = np.mean([c.replicas[:count] for c in estimates], axis=0)
        return CorrelationMatrix(
            entries=np.mean([c.entries for c in estimates], axis=0),
            time=float(times[-1]),
            basis="physical",
            stderr=stderr,
            replicas=replicas,
            n_samples=sum(c.n_samples for c in estimates),
            skipped=sum(c.skipped for c in estimates),
        )

    def trajectory(
        self,
        initial: SlaterState,
        times: Sequence[float],
        M_s: int,
        seed: int,
        state_index: int = 0,
        reference: Optional[CorrelationMatrix] = None,
    ) -> List[ScramblingDiagnostics]:
        """
        Scrambling diagnostics along ``times`` for one initial state.

        Args:
            initial: Initial Slater state
            times: Time grid
            M_s: Samples per time
            seed: Run seed
            state_index: Index of the initial state in the average
            reference: Long-time correlation matrix; enables Z(t)

        Returns:
            One ScramblingDiagnostics per time
        """
        start_time = time.time()
        diagnostics = []
        for time_index, t in enumerate(times):
            corr = self.correlations(initial, float(t), M_s, seed, state_index, time_index)
            diagnostics.append(scrambling_diagnostics(corr, self.N, corr_inf=reference))

        self._logger.debug(
            "Trajectory computed",
            state_index=state_index,
            n_times=len(diagnostics),
            elapsed=f"{time.time() - start_time:.3f}s",
        )
        return diagnostics
