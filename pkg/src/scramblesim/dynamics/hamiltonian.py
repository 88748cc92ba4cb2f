"""Single-particle hopping Hamiltonian of the logical chain."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal


@dataclass(frozen=True)
class HoppingHamiltonian:
    """
    Open-boundary nearest-neighbor hopping on L_tau sites.

    h has unit off-diagonals and zero diagonal. The spectral decomposition
    is stored once: ``energies`` ascending, ``modes`` the real orthonormal
    eigenvectors as columns.
    """

    size: int
    energies: np.ndarray
    modes: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """Dense h."""
        h = np.zeros((self.size, self.size))
        idx = np.arange(self.size - 1)
        h[idx, idx + 1] = 1.0
        h[idx + 1, idx] = 1.0
        return h

    def analytic_energies(self) -> np.ndarray:
        """2 cos(q pi / (L_tau + 1)), q = 1..L_tau, ascending."""
        q = np.arange(1, self.size + 1)
        return np.sort(2.0 * np.cos(q * np.pi / (self.size + 1)))

    def phases(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.energies * t)

    def propagator(self, t: float) -> np.ndarray:
        """exp(-i h t) from the spectral decomposition."""
        return (self.modes * self.phases(t)) @ self.modes.T

    def apply_propagator(self, vectors: np.ndarray, t: float) -> np.ndarray:
        """exp(-i h t) @ vectors without forming the propagator."""
        return self.modes @ (self.phases(t)[:, None] * (self.modes.T @ vectors))


@lru_cache(maxsize=32)
def build_hamiltonian(L_tau: int) -> HoppingHamiltonian:
    """
    Build and diagonalize the logical hopping Hamiltonian.

    Args:
        L_tau: Number of logical sites

    Returns:
        HoppingHamiltonian with its spectral decomposition

    Raises:
        ValueError: If L_tau < 1
    """
    if L_tau < 1:
        raise ValueError(f"L_tau must be >= 1, got {L_tau}")

    if L_tau == 1:
        energies, modes = np.zeros(1), np.ones((1, 1))
    else:
        energies, modes = eigh_tridiagonal(np.zeros(L_tau), np.ones(L_tau - 1))

    energies.setflags(write=False)
    modes.setflags(write=False)
    return HoppingHamiltonian(size=L_tau, energies=energies, modes=modes)
