"""
Bijection between logical and physical configurations.

Logical string -> physical string: replace '0' by '0' and '1' by '01',
then drop the leftmost character (always '0'). In particle coordinates the
i-th particle (0-based) at logical site k_i sits at physical site k_i + i.
"""

from typing import List, Union

import numpy as np

from scramblesim.exceptions.errors import ConstraintViolationError
from scramblesim.mapping.configs import (
    BitConfig,
    LogicalConfig,
    PhysicalConfig,
    has_adjacent_pair,
)
from scramblesim.utils.validators import validate_bitstring


def check_constraint(bits: Union[str, BitConfig]) -> bool:
    """
    True iff no two adjacent sites are occupied (the projector keeps it).

    Args:
        bits: ASCII bitstring or packed configuration
    """
    if isinstance(bits, BitConfig):
        return not has_adjacent_pair(bits.bits)
    return "11" not in validate_bitstring(bits)


def logical_to_physical(m: LogicalConfig) -> PhysicalConfig:
    """Map a logical configuration to its physical image."""
    sites = [k + i for i, k in enumerate(m.sites)]
    length = m.length + m.count - 1
    return PhysicalConfig.from_sites(sites, length)


def particle_coordinates(n: Union[PhysicalConfig, str]) -> List[int]:
    """
    Logical particle positions k_i = j_i - i of a physical configuration.

    Raises:
        ConstraintViolationError: If two adjacent sites are occupied
    """
    if isinstance(n, str):
        if not check_constraint(n):
            raise ConstraintViolationError(n)
        n = PhysicalConfig.from_string(n)
    return [j - i for i, j in enumerate(n.sites)]


def physical_to_logical(n: Union[PhysicalConfig, str]) -> LogicalConfig:
    """
    Inverse of :func:`logical_to_physical`.

    Raises:
        ConstraintViolationError: If two adjacent sites are occupied
    """
    if isinstance(n, str):
        if not check_constraint(n):
            raise ConstraintViolationError(n)
        n = PhysicalConfig.from_string(n)
    length = n.length + 1 - n.count
    return LogicalConfig.from_sites(particle_coordinates(n), length)


def logical_sites_to_physical(sites: np.ndarray) -> np.ndarray:
    """Vectorized k -> j for sorted site arrays of shape (..., N)."""
    sites = np.asarray(sites)
    return sites + np.arange(sites.shape[-1])


def physical_sites_to_logical(sites: np.ndarray) -> np.ndarray:
    """Vectorized j -> k for sorted site arrays of shape (..., N)."""
    sites = np.asarray(sites)
    return sites - np.arange(sites.shape[-1])
