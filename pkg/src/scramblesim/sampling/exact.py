"""Exhaustive |Psi_m|^2 over an enumerated logical sector."""

from math import comb
from typing import Dict, Tuple

import numpy as np

from scramblesim.config.defaults import DEFAULT_EXACT_DISTRIBUTION_CAP
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import SectorTooLargeError
from scramblesim.mapping.basis import SectorBasis
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.sampling.base import BaseSampler

_CHUNK = 1 << 15


def sector_amplitudes(state: SlaterState, basis: SectorBasis) -> np.ndarray:
    """Slater amplitudes det U[m rows] for every configuration of ``basis``."""
    amplitudes = np.empty(basis.dimension, dtype=complex)
    if state.N == 0:
        amplitudes[:] = 1.0
        return amplitudes
    for start in range(0, basis.dimension, _CHUNK):
        rows = basis.sites[start : start + _CHUNK]
        amplitudes[start : start + _CHUNK] = np.linalg.det(state.orbitals[rows])
    return amplitudes


def exact_probabilities(
    state: SlaterState,
    cap: int = DEFAULT_EXACT_DISTRIBUTION_CAP,
) -> Tuple[SectorBasis, np.ndarray]:
    """
    Normalized |Psi_m|^2 over the whole logical sector.

    Returns:
        (basis, probabilities) aligned by basis index

    Raises:
        SectorTooLargeError: If C(L_tau, N) exceeds ``cap``
    """
    dimension = comb(state.L_tau, state.N)
    if dimension > cap:
        raise SectorTooLargeError(dimension, cap)
    basis = SectorBasis(state.L_tau, state.N)
    probabilities = np.abs(sector_amplitudes(state, basis)) ** 2
    return basis, probabilities / probabilities.sum()


def exact_distribution(
    state: SlaterState,
    cap: int = DEFAULT_EXACT_DISTRIBUTION_CAP,
) -> Dict[LogicalConfig, float]:
    """Map of every logical configuration to its probability."""
    basis, probabilities = exact_probabilities(state, cap=cap)
    return {
        LogicalConfig(int(bits), basis.length): float(p)
        for bits, p in zip(basis.bits, probabilities)
    }


class ExactSampler(BaseSampler):
    """Draws from the enumerated distribution; small sectors only."""

    def __init__(self, cap: int = DEFAULT_EXACT_DISTRIBUTION_CAP, **kwargs):
        self.cap = cap
        self._cache = {}
        super().__init__(**kwargs)

    @property
    def name(self) -> str:
        return "exact"

    def _table(self, state: SlaterState) -> Tuple[SectorBasis, np.ndarray]:
        key = id(state)
        if key not in self._cache:
            basis, probabilities = exact_probabilities(state, cap=self.cap)
            self._cache = {key: (state, basis, np.cumsum(probabilities))}
        _, basis, cumulative = self._cache[key]
        return basis, cumulative

    def sample_sites(self, state: SlaterState, rng: np.random.Generator) -> np.ndarray:
        basis, cumulative = self._table(state)
        index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        return basis.sites[min(index, basis.dimension - 1)].copy()
