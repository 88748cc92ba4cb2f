"""Slater-determinant states of the logical free-fermion chain."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import structlog

from scramblesim.core.result import CorrelationMatrix
from scramblesim.dynamics.hamiltonian import HoppingHamiltonian, build_hamiltonian
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.utils.validators import validate_orbitals

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class SlaterState:
    """
    N-particle Slater determinant on L_tau logical sites.

    Attributes:
        orbitals: L_tau x N matrix whose columns are the occupied orbitals
        time: Evolution time of the state
    """

    orbitals: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        orbitals = np.array(self.orbitals, dtype=complex)
        if orbitals.ndim != 2:
            raise ValueError(f"Orbitals must be 2D, got shape {orbitals.shape}")
        orbitals.setflags(write=False)
        object.__setattr__(self, "orbitals", orbitals)
        object.__setattr__(self, "time", float(self.time))

    @property
    def L_tau(self) -> int:
        return self.orbitals.shape[0]

    @property
    def N(self) -> int:
        return self.orbitals.shape[1]

    @property
    def L(self) -> int:
        """Length of the physical chain this state maps to."""
        return self.L_tau + self.N - 1

    def gram(self) -> np.ndarray:
        return self.orbitals.conj().T @ self.orbitals

    def orthonormality_error(self) -> float:
        return float(np.max(np.abs(self.gram() - np.eye(self.N)), initial=0.0))


def initial_slater(m0: Union[LogicalConfig, str]) -> SlaterState:
    """
    Product state with one unit-vector orbital per occupied site.

    Args:
        m0: Initial logical configuration

    Returns:
        SlaterState at time 0 with columns e_k for occupied k, ascending
    """
    if isinstance(m0, str):
        m0 = LogicalConfig.from_string(m0)
    orbitals = np.zeros((m0.length, m0.count), dtype=complex)
    for column, site in enumerate(m0.sites):
        orbitals[site, column] = 1.0
    return SlaterState(orbitals=orbitals, time=0.0)


def evolve(
    s: SlaterState,
    t: float,
    hamiltonian: Optional[HoppingHamiltonian] = None,
) -> SlaterState:
    """
    Evolve a Slater state by exp(-i h t).

    Args:
        s: State to evolve
        t: Time increment
        hamiltonian: Optional prebuilt Hamiltonian of matching size

    Returns:
        New state at time s.time + t
    """
    hamiltonian = hamiltonian or build_hamiltonian(s.L_tau)
    if hamiltonian.size != s.L_tau:
        raise ValueError(
            f"Hamiltonian size {hamiltonian.size} does not match L_tau={s.L_tau}"
        )
    if t == 0:
        return SlaterState(orbitals=s.orbitals, time=s.time)
    return SlaterState(
        orbitals=hamiltonian.apply_propagator(s.orbitals, t),
        time=s.time + t,
    )


def ground_state_slater(L_tau: int, N: int) -> SlaterState:
    """
    Ground state: the N lowest-energy modes, ordered by ascending energy.

    Raises:
        ValueError: If N > L_tau
    """
    if not 0 <= N <= L_tau:
        raise ValueError(f"Need 0 <= N <= L_tau, got L_tau={L_tau}, N={N}")
    hamiltonian = build_hamiltonian(L_tau)
    return SlaterState(orbitals=hamiltonian.modes[:, :N], time=0.0)


def ground_state_energy(L_tau: int, N: int) -> float:
    return float(np.sum(build_hamiltonian(L_tau).energies[:N]))


def logical_correlation(s: SlaterState) -> CorrelationMatrix:
    """
    Logical one-body correlations <f_k^dag f_k'>.

    Returns:
        L_tau x L_tau CorrelationMatrix, exact (no standard errors)
    """
    phi = s.orbitals
    entries = (phi @ phi.conj().T).conj()
    return CorrelationMatrix(entries=entries, time=s.time, basis="logical")


def save_state(s: SlaterState, path: Union[str, Path]) -> Path:
    """Checkpoint a state as JSON with [re, im] pairs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "L_tau": s.L_tau,
        "N": s.N,
        "time": s.time,
        "orbitals": np.stack([s.orbitals.real, s.orbitals.imag], axis=-1).tolist(),
    }
    with open(path, "w") as f:
        json.dump(payload, f)
    logger.debug("State saved", path=str(path), L_tau=s.L_tau, N=s.N)
    return path


def load_state(path: Union[str, Path]) -> SlaterState:
    """
    Load a state written by :func:`save_state`.

    Raises:
        ValueError: If the stored shape disagrees with L_tau/N or the
            orbitals are not orthonormal
    """
    with open(path) as f:
        payload = json.load(f)

    pairs = np.asarray(payload["orbitals"], dtype=float).reshape(
        payload["L_tau"], payload["N"], 2
    )
    orbitals = validate_orbitals(pairs[..., 0] + 1j * pairs[..., 1])
    return SlaterState(orbitals=orbitals, time=payload["time"])
