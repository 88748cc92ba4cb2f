"""Result dataclasses for sampling, observables and fits."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


def _complex_to_pairs(a: np.ndarray) -> list:
    return np.stack([a.real, a.imag], axis=-1).tolist()


@dataclass
class SampleBatch:
    """
    M_s logical configurations drawn from one Slater state.

    Configurations are stored as an (M_s, N) array of ascending occupied
    logical sites; ``configs`` materializes them as LogicalConfig values.
    """

    sites: np.ndarray
    L_tau: int
    seed: int
    state_time: float = 0.0
    sampler: str = "chain_rule"
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.sites = np.asarray(self.sites, dtype=np.int64)
        if self.sites.ndim != 2:
            raise ValueError(f"sites must be 2D, got shape {self.sites.shape}")
        if self.sites.size and (
            self.sites.min() < 0 or self.sites.max() >= self.L_tau
        ):
            raise ValueError(f"Sampled sites fall outside 0..{self.L_tau - 1}")
        if self.sites.shape[1] > 1 and np.any(np.diff(self.sites, axis=1) <= 0):
            raise ValueError("Sampled sites must be strictly increasing per row")

    @property
    def M_s(self) -> int:
        return int(self.sites.shape[0])

    @property
    def N(self) -> int:
        return int(self.sites.shape[1])

    @property
    def L(self) -> int:
        return self.L_tau + self.N - 1

    def __len__(self) -> int:
        return self.M_s

    @property
    def configs(self) -> List["LogicalConfig"]:
        from scramblesim.mapping.configs import LogicalConfig

        return [LogicalConfig.from_sites(row, self.L_tau) for row in self.sites]

    @property
    def physical_sites(self) -> np.ndarray:
        """(M_s, N) physical sites j_i = k_i + i."""
        return self.sites + np.arange(self.N)

    def occupations(self, physical: bool = True) -> np.ndarray:
        """(M_s, L) or (M_s, L_tau) 0/1 occupation table."""
        sites = self.physical_sites if physical else self.sites
        width = self.L if physical else self.L_tau
        occ = np.zeros((self.M_s, width), dtype=np.int8)
        rows = np.repeat(np.arange(self.M_s), self.N)
        occ[rows, sites.ravel()] = 1
        return occ

    def strings(self) -> List[str]:
        return [str(config) for config in self.configs]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "M_s": self.M_s,
            "L_tau": self.L_tau,
            "N": self.N,
            "time": self.state_time,
            "sampler": self.sampler,
        }


@dataclass
class DensityEstimate:
    """Per-site mean occupations with standard errors."""

    mean: np.ndarray
    stderr: np.ndarray
    n_samples: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean.tolist(),
            "stderr": self.stderr.tolist(),
            "n_samples": self.n_samples,
        }


@dataclass
class CorrelationMatrix:
    """
    One-body correlation matrix, entry (j, j') = <c_j^dag c_j'>.

    Estimated matrices carry per-entry standard errors and the jackknife
    leave-one-block-out replicas they were computed from, so derived
    quantities can be given jackknife errors too.
    """

    entries: np.ndarray
    time: float = 0.0
    basis: str = "physical"
    stderr: Optional[np.ndarray] = None
    replicas: Optional[np.ndarray] = None
    n_samples: Optional[int] = None
    skipped: int = 0

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError(
                f"Correlation matrix must be square, got shape {self.entries.shape}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def is_estimate(self) -> bool:
        return self.stderr is not None

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "basis": self.basis,
            "time": self.time,
            "dim": self.dim,
            "entries": _complex_to_pairs(self.entries),
        }
        if self.stderr is not None:
            result["stderr"] = self.stderr.tolist()
            result["n_samples"] = self.n_samples
            result["skipped"] = self.skipped
        return result


@dataclass
class NaturalOrbitalSpectrum:
    """Descending natural-orbital occupations and their eigenvectors."""

    lambdas: np.ndarray
    vectors: np.ndarray
    time: float = 0.0
    clip_mass: float = 0.0

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        if np.any(np.diff(self.lambdas) > 0):
            raise ValueError("Natural-orbital occupations must be sorted descending")

    @property
    def total(self) -> float:
        return float(self.lambdas.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "time": self.time,
            "lambdas": self.lambdas.tolist(),
            "clip_mass": self.clip_mass,
        }


@dataclass
class ScramblingDiagnostics:
    """Hamming distance D, overlap chi and relaxation overlap Z at one time."""

    D: float
    chi: float
    Z: Optional[float] = None
    time: float = 0.0
    D_stderr: Optional[float] = None
    Z_stderr: Optional[float] = None
    lambdas: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "time": self.time,
            "D": self.D,
            "D_stderr": self.D_stderr,
            "chi": self.chi,
            "Z": self.Z,
            "Z_stderr": self.Z_stderr,
        }


@dataclass
class FitResult:
    """
    Outcome of one curve fit.

    Attributes:
        model: Name of the fitted model
        params: Fitted parameter values by name
        covariance: Covariance matrix in the order of ``params``
        residual_norm: Euclidean norm of the residuals
        window: Data range (x_min, x_max) the fit used
        residuals: Residual vector
        r_squared: Coefficient of determination where defined
    """

    model: str
    params: Dict[str, float]
    covariance: np.ndarray
    residual_norm: float
    window: Tuple[float, float]
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    r_squared: Optional[float] = None
    n_points: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.residual_norm):
            raise ValueError(f"Residual norm is not finite: {self.residual_norm}")

    def __getitem__(self, name: str) -> float:
        return self.params[name]

    @property
    def stderr(self) -> Dict[str, float]:
        errors = np.sqrt(np.clip(np.diag(np.atleast_2d(self.covariance)), 0, None))
        return dict(zip(self.params, errors.tolist()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "params": dict(self.params),
            "stderr": self.stderr,
            "covariance": np.atleast_2d(self.covariance).tolist(),
            "residual_norm": self.residual_norm,
            "residuals": np.asarray(self.residuals).tolist(),
            "r_squared": self.r_squared,
            "window": list(self.window),
            "n_points": self.n_points,
            **({"metadata": self.metadata} if self.metadata else {}),
        }


@dataclass
class TrajectoryResult:
    """Scrambling diagnostics along a time grid, averaged over initial states."""

    times: np.ndarray
    D: np.ndarray
    D_stderr: np.ndarray
    chi: np.ndarray
    lambdas: np.ndarray
    Z: Optional[np.ndarray] = None
    Z_stderr: Optional[np.ndarray] = None
    lambdas_infinity: Optional[np.ndarray] = None
    mean_sqrt_n: Optional[np.ndarray] = None
    n_initial_states: int = 1
    L: int = 0
    N: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def density(self) -> float:
        return self.N / self.L if self.L else 0.0

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "L": self.L,
            "N": self.N,
            "n_initial_states": self.n_initial_states,
            "times": self.times.tolist(),
            "D": self.D.tolist(),
            "D_stderr": self.D_stderr.tolist(),
            "chi": self.chi.tolist(),
        }
        if self.Z is not None:
            result["Z"] = self.Z.tolist()
            result["Z_stderr"] = self.Z_stderr.tolist()
        if self.mean_sqrt_n is not None:
            result["mean_sqrt_n"] = self.mean_sqrt_n.tolist()
        return result


@dataclass
class MomentumResult:
    """Momentum distribution, structure factor and Luttinger parameter."""

    k: np.ndarray
    n_k: np.ndarray
    S_k: np.ndarray
    K: Optional[float] = None
    K_fit: Optional[FitResult] = None
    L: int = 0
    N: int = 0
    n_k_stderr: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "N": self.N,
            "k": self.k.tolist(),
            "n_k": self.n_k.tolist(),
            "n_k_stderr": None if self.n_k_stderr is None else self.n_k_stderr.tolist(),
            "S_k": self.S_k.tolist(),
            "K": self.K,
            "K_fit": self.K_fit.to_dict() if self.K_fit is not None else None,
        }


@dataclass
class OTOCResult:
    """Thermal OTOC G_{i j}(t) for one source site and a set of probe sites."""

    times: np.ndarray
    sites: np.ndarray
    values: np.ndarray
    source_site: int
    beta: float
    L: int
    N: int
    constrained: bool = True
    ensemble: str = "canonical-fixed-N"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = (len(self.times), len(self.sites))
        if self.values.shape != expected:
            raise ValueError(
                f"OTOC values shape {self.values.shape} != (n_times, n_sites) {expected}"
            )

    @property
    def distances(self) -> np.ndarray:
        return np.abs(np.asarray(self.sites) - self.source_site)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "N": self.N,
            "source_site": self.source_site,
            "beta": self.beta,
            "constrained": self.constrained,
            "ensemble": self.ensemble,
            "times": np.asarray(self.times).tolist(),
            "sites": np.asarray(self.sites).tolist(),
            "values": self.values.tolist(),
        }
