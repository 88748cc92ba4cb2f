"""Enumerated particle-number sectors with fast index lookup."""

from itertools import combinations
from math import comb
from typing import Iterator, List, Union

import numpy as np

from scramblesim.mapping.configs import BitConfig, PhysicalConfig
from scramblesim.utils.validators import validate_sector

# Packed words are uint64; longer chains only exist on the sampling side.
MAX_PACKED_SITES = 63


def _subsets(n_sites: int, n_particles: int) -> np.ndarray:
    """
    All sorted n_particles-subsets of range(n_sites), shape (dim, n_particles).

    Rows come in ascending bitstring order (site 0 leftmost). Tuples from
    ``combinations`` are in ascending tuple order, which is exactly the
    reverse of bitstring order for a fixed particle number.
    """
    dim = comb(n_sites, n_particles)
    if n_particles == 0:
        return np.zeros((1, 0), dtype=np.int64)
    flat = np.fromiter(
        (s for subset in combinations(range(n_sites), n_particles) for s in subset),
        dtype=np.int64,
        count=dim * n_particles,
    )
    return flat.reshape(dim, n_particles)[::-1].copy()


def pack_sites(sites: np.ndarray) -> np.ndarray:
    """Pack (dim, N) site arrays into uint64 words, site 0 in bit 0."""
    sites = np.asarray(sites, dtype=np.uint64)
    if sites.shape[-1] == 0:
        return np.zeros(sites.shape[:-1], dtype=np.uint64)
    return np.bitwise_or.reduce(np.left_shift(np.uint64(1), sites), axis=-1)


class SectorBasis:
    """
    All configurations of N particles on L sites, in ascending bitstring order.

    Attributes:
        length: Number of sites
        n_particles: Particle number
        sites: (dim, N) array of occupied sites per configuration
        bits: (dim,) packed configurations
    """

    config_type = BitConfig

    def __init__(self, length: int, n_particles: int, sites: np.ndarray = None):
        if length > MAX_PACKED_SITES:
            raise ValueError(
                f"Enumerated bases support at most {MAX_PACKED_SITES} sites, got {length}"
            )
        if not 0 <= n_particles <= length:
            raise ValueError(f"Need 0 <= N <= L, got L={length}, N={n_particles}")

        self.length = length
        self.n_particles = n_particles
        self.sites = _subsets(length, n_particles) if sites is None else sites
        self.bits = pack_sites(self.sites)

        self._order = np.argsort(self.bits, kind="stable")
        self._sorted_bits = self.bits[self._order]

    @property
    def dimension(self) -> int:
        return int(self.bits.shape[0])

    def __len__(self) -> int:
        return self.dimension

    def __getitem__(self, index: int) -> BitConfig:
        return self.config_type(int(self.bits[index]), self.length)

    def __iter__(self) -> Iterator[BitConfig]:
        for i in range(self.dimension):
            yield self[i]

    def __contains__(self, config: Union[BitConfig, str]) -> bool:
        return self.index(config) >= 0

    @property
    def occupations(self) -> np.ndarray:
        """(dim, L) 0/1 occupation table."""
        occ = np.zeros((self.dimension, self.length), dtype=np.int8)
        rows = np.repeat(np.arange(self.dimension), self.n_particles)
        occ[rows, self.sites.ravel()] = 1
        return occ

    def strings(self) -> List[str]:
        return [str(config) for config in self]

    def lookup(self, bits: np.ndarray) -> np.ndarray:
        """
        Vectorized index lookup of packed configurations.

        Args:
            bits: Packed configurations of any shape

        Returns:
            Integer array of basis indices, -1 where absent
        """
        bits = np.asarray(bits, dtype=np.uint64)
        pos = np.searchsorted(self._sorted_bits, bits)
        pos = np.minimum(pos, self.dimension - 1)
        found = self._sorted_bits[pos] == bits
        return np.where(found, self._order[pos], -1)

    def index(self, config: Union[BitConfig, str]) -> int:
        """Basis index of a configuration, -1 if absent."""
        if isinstance(config, str):
            config = BitConfig.from_string(config)
        if config.length != self.length:
            return -1
        return int(self.lookup(np.array([config.bits], dtype=np.uint64))[0])

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(L={self.length}, N={self.n_particles}, "
            f"dim={self.dimension})"
        )


class ConstrainedBasis(SectorBasis):
    """
    Physical configurations of N particles on L sites with no two
    neighbors occupied, in ascending bitstring order.

    Built from the logical N-subsets of L_tau = L + 1 - N sites through
    j_i = k_i + i, which preserves the ordering.
    """

    config_type = PhysicalConfig

    def __init__(self, length: int, n_particles: int):
        validate_sector(length, n_particles)
        self.L_tau = length + 1 - n_particles
        logical = _subsets(self.L_tau, n_particles)
        self.logical_sites = logical
        physical = logical + np.arange(n_particles, dtype=np.int64)
        super().__init__(length, n_particles, sites=physical)

    @property
    def logical_bits(self) -> np.ndarray:
        """Packed logical images, aligned with ``bits``."""
        return pack_sites(self.logical_sites)


def enumerate_physical(L: int, N: int) -> ConstrainedBasis:
    """
    Enumerate the constrained physical sector.

    Args:
        L: Number of physical sites
        N: Particle number

    Returns:
        Basis of size C(L + 1 - N, N)

    Raises:
        InvalidSectorError: If N > (L + 1) / 2
    """
    return ConstrainedBasis(L, N)


def enumerate_sector(L: int, N: int) -> SectorBasis:
    """Enumerate the unconstrained N-particle sector on L sites."""
    return SectorBasis(L, N)
