"""ScramblingSimulator: the public API for scrambling experiments."""

import time
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog
from tqdm import tqdm

from scramblesim.config.defaults import (
    DEFAULT_BETA,
    DEFAULT_INITIAL_STATES,
    DEFAULT_LUTTINGER_POINTS,
    DEFAULT_NUM_SAMPLES,
)
from scramblesim.config.settings import SimulationConfig
from scramblesim.core.pipeline import ScramblingPipeline
from scramblesim.core.result import (
    MomentumResult,
    OTOCResult,
    ScramblingDiagnostics,
    TrajectoryResult,
)
from scramblesim.dynamics.slater import SlaterState, ground_state_slater, initial_slater
from scramblesim.exact.evolution import logical_manybody_spectrum
from scramblesim.exact.operators import build_physical_hamiltonian
from scramblesim.exact.otoc import OTOCEngine
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.observables.diffusion import mean_sqrt_density
from scramblesim.observables.estimator import correlation_estimate
from scramblesim.observables.orbitals import natural_orbitals
from scramblesim.observables.momentum import (
    momentum_distribution,
    momentum_distribution_stderr,
    momentum_grid,
    structure_factor,
)
from scramblesim.analysis.fits import fit_luttinger
from scramblesim.sampling.rng import random_product_sites
from scramblesim.utils.validators import validate_bitstring, validate_sector, validate_time_grid

logger = structlog.get_logger(__name__)

# Called with (state_index, diagnostics) after each initial state.
StateCallback = Callable[[int, List[ScramblingDiagnostics]], None]


def _combined_stderr(errors: np.ndarray) -> np.ndarray:
    """sqrt(sum of squared per-state errors) / n_states along axis 0."""
    errors = np.nan_to_num(np.asarray(errors, dtype=float))
    return np.sqrt(np.sum(errors**2, axis=0)) / errors.shape[0]


class ScramblingSimulator:
    """
    Run scrambling experiments on the constrained chain.

    This class provides a high-level API for:
        - Hamming distance D(t) averaged over initial states
        - Correlation relaxation Z(t) and natural-orbital occupations
        - Ground-state momentum distribution and Luttinger parameter
        - Thermal OTOCs by exact diagonalization
        - The logical/physical spectrum equivalence check

    Example:
        >>> simulator = ScramblingSimulator()
        >>> result = simulator.hamming(L=64, N=8, times=np.geomspace(0.1, 100, 30), seed=7)
        >>> print(result.D[-1])

    Example with custom config:
        >>> config = SimulationConfig(sampler="dpp", threads=4, jackknife_blocks=10)
        >>> simulator = ScramblingSimulator(config)
    """

    def __init__(self, config: Optional[SimulationConfig] = None):
        self.config = config or SimulationConfig()
        self._logger = logger.bind(component="simulator")
        self._pipelines: Dict[tuple, ScramblingPipeline] = {}

        self._logger.info(
            "ScramblingSimulator initialized",
            sampler=self.config.sampler,
            threads=self.config.threads,
        )

    def pipeline(self, L: int, N: int) -> ScramblingPipeline:
        """Pipeline for the (L, N) sector, created on first use."""
        key = (L, N)
        if key not in self._pipelines:
            self._pipelines[key] = ScramblingPipeline(L, N, self.config)
        return self._pipelines[key]

    def initial_states(
        self,
        L: int,
        N: int,
        initial_state: str = "random-product",
        n_initial_states: int = DEFAULT_INITIAL_STATES,
        seed: int = 0,
    ) -> List[SlaterState]:
        """
        Initial Slater states for a run.

        Args:
            L: Physical sites
            N: Particles
            initial_state: "ground", "random-product" or a logical bitstring
            n_initial_states: Number of random product states
            seed: Run seed; random product state s uses the stream (seed, s)

        Returns:
            One state for "ground" and bitstrings, ``n_initial_states``
            states otherwise
        """
        validate_sector(L, N)
        L_tau = L + 1 - N

        if initial_state == "ground":
            return [ground_state_slater(L_tau, N)]

        if initial_state == "random-product":
            if n_initial_states < 1:
                raise ValueError(f"n_initial_states must be >= 1, got {n_initial_states}")
            return [
                initial_slater(
                    LogicalConfig.from_sites(random_product_sites(L_tau, N, seed, s), L_tau)
                )
                for s in range(n_initial_states)
            ]

        m0 = LogicalConfig.from_string(validate_bitstring(initial_state))
        if m0.length != L_tau or m0.count != N:
            raise ValueError(
                f"Initial bitstring {initial_state} is not in the sector "
                f"L_tau={L_tau}, N={N}"
            )
        return [initial_slater(m0)]

    def _trajectories(
        self,
        L: int,
        N: int,
        times: np.ndarray,
        M_s: int,
        seed: int,
        initial_state: str,
        n_initial_states: int,
        with_reference: bool,
        on_state: Optional[StateCallback] = None,
    ):
        pipeline = self.pipeline(L, N)
        states = self.initial_states(L, N, initial_state, n_initial_states, seed)
        runs: List[List[ScramblingDiagnostics]] = []
        references = []
        for index, initial in enumerate(
            tqdm(states, disable=not self.config.show_progress, desc="initial states")
        ):
            reference = None
            if with_reference:
                reference = pipeline.reference(initial, M_s, seed, index)
                references.append(reference)
            runs.append(pipeline.trajectory(initial, times, M_s, seed, index, reference))
            if on_state is not None:
                on_state(index, runs[-1])
        return states, runs, references

    def hamming(
        self,
        L: int,
        N: int,
        times: Sequence[float],
        M_s: int = DEFAULT_NUM_SAMPLES,
        seed: int = 0,
        initial_state: str = "random-product",
        n_initial_states: int = DEFAULT_INITIAL_STATES,
        on_state: Optional[StateCallback] = None,
    ) -> TrajectoryResult:
        """
        Hamming distance D(t) averaged over initial states.

        Returns:
            TrajectoryResult with D, D_stderr, chi and mean occupations
        """
        return self._run(
            L, N, times, M_s, seed, initial_state, n_initial_states, False, on_state
        )

    def relax(
        self,
        L: int,
        N: int,
        times: Sequence[float],
        M_s: int = DEFAULT_NUM_SAMPLES,
        seed: int = 0,
        initial_state: str = "random-product",
        n_initial_states: int = DEFAULT_INITIAL_STATES,
        on_state: Optional[StateCallback] = None,
    ) -> TrajectoryResult:
        """
        Relaxation overlap Z(t) against the long-time reference.

        Returns:
            TrajectoryResult with Z, Z_stderr, occupations lambda_l(t),
            the reference occupations and the mean sqrt density
        """
        return self._run(
            L, N, times, M_s, seed, initial_state, n_initial_states, True, on_state
        )

    def _run(
        self,
        L: int,
        N: int,
        times: Sequence[float],
        M_s: int,
        seed: int,
        initial_state: str,
        n_initial_states: int,
        with_reference: bool,
        on_state: Optional[StateCallback] = None,
    ) -> TrajectoryResult:
        times = validate_time_grid(times)
        start_time = time.time()
        states, runs, references = self._trajectories(
            L, N, times, M_s, seed, initial_state, n_initial_states, with_reference, on_state
        )

        D = np.array([[d.D for d in run] for run in runs])
        D_err = np.array([[d.D_stderr or 0.0 for d in run] for run in runs])
        chi = np.array([[d.chi for d in run] for run in runs])
        lambdas = np.array([[d.lambdas for d in run] for run in runs])
        sqrt_n = np.array([[mean_sqrt_density(d.density) for d in run] for run in runs])

        Z = Z_stderr = lambdas_inf = None
        if with_reference and N > 0:
            Z = np.array([[d.Z for d in run] for run in runs]).mean(axis=0)
            Z_err = np.array([[d.Z_stderr or 0.0 for d in run] for run in runs])
            Z_stderr = _combined_stderr(Z_err)
            lambdas_inf = np.mean([natural_orbitals(r).lambdas for r in references], axis=0)

        self._logger.info(
            "Trajectory finished",
            L=L,
            N=N,
            n_initial_states=len(states),
            n_times=len(times),
            elapsed=f"{time.time() - start_time:.2f}s",
        )
        return TrajectoryResult(
            times=times,
            D=D.mean(axis=0),
            D_stderr=_combined_stderr(D_err),
            chi=chi.mean(axis=0),
            lambdas=lambdas.mean(axis=0),
            Z=Z,
            Z_stderr=Z_stderr,
            lambdas_infinity=lambdas_inf,
            mean_sqrt_n=sqrt_n.mean(axis=0),
            n_initial_states=len(states),
            L=L,
            N=N,
            metadata={
                "M_s": M_s,
                "seed": seed,
                "initial_state": initial_state,
                "sampler": self.config.sampler,
                "t_infinity": self.config.t_infinity if with_reference else None,
            },
        )

    def momentum(
        self,
        L: int,
        N: int,
        M_s: int = DEFAULT_NUM_SAMPLES,
        seed: int = 0,
        n_points: int = DEFAULT_LUTTINGER_POINTS,
    ) -> MomentumResult:
        """
        Ground-state n(k), S(k) and the Luttinger parameter K.

        Raises:
            FitFailureError: If the small-k slope of S(k) is not positive
        """
        pipeline = self.pipeline(L, N)
        state = ground_state_slater(pipeline.L_tau, N)
        batch = pipeline.sample(state, M_s, seed, 0, 0)
        corr = correlation_estimate(
            state,
            batch,
            n_blocks=self.config.jackknife_blocks,
            max_skip_fraction=self.config.max_skip_fraction,
        )
        k, S_k = structure_factor(batch, physical=True)
        K_fit = fit_luttinger(k, S_k, n_points=n_points)

        self._logger.info("Momentum distribution computed", L=L, N=N, K=K_fit["K"])
        return MomentumResult(
            k=momentum_grid(L),
            n_k=momentum_distribution(corr),
            S_k=S_k,
            K=K_fit["K"],
            K_fit=K_fit,
            L=L,
            N=N,
            n_k_stderr=momentum_distribution_stderr(corr),
        )

    def otoc(
        self,
        L: int,
        N: int,
        source_site: int,
        times: Sequence[float],
        beta: float = DEFAULT_BETA,
        sites: Optional[Sequence[int]] = None,
        constrained: bool = True,
    ) -> OTOCResult:
        """
        Thermal OTOC profile by exact diagonalization.

        Raises:
            SectorTooLargeError: If the sector exceeds ``config.max_sector_dim``
        """
        engine = OTOCEngine(
            L,
            N,
            beta=beta,
            constrained=constrained,
            max_dim=self.config.max_sector_dim,
            threads=self.config.threads,
        )
        return engine.profile(source_site, times, sites)

    def spectrum_check(self, L: int, N: int, tol: float = 1e-9) -> Dict[str, Any]:
        """
        Compare the constrained many-body spectrum with logical subset sums.

        Returns:
            Report with ``passed``, ``dimension`` and ``max_deviation``
        """
        start_time = time.time()
        physical = build_physical_hamiltonian(L, N, max_dim=self.config.max_sector_dim)
        logical = logical_manybody_spectrum(L + 1 - N, N)
        energies = np.sort(physical.energies)

        if energies.shape != logical.shape:
            deviation = float("inf")
        else:
            deviation = float(np.max(np.abs(energies - logical), initial=0.0))
        passed = deviation <= tol

        self._logger.info(
            "Spectrum check finished",
            L=L,
            N=N,
            dimension=physical.dimension,
            max_deviation=deviation,
            passed=passed,
            elapsed=f"{time.time() - start_time:.3f}s",
        )
        return {
            "L": L,
            "N": N,
            "dimension": physical.dimension,
            "max_deviation": deviation,
            "tolerance": tol,
            "passed": passed,
        }
