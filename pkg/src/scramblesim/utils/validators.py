"""Input validation utilities."""

from typing import Any

import numpy as np

from scramblesim.exceptions.errors import InvalidSectorError


def validate_bitstring(bits: Any) -> str:
    """
    Validate an ASCII occupation string.

    Args:
        bits: Input to validate

    Returns:
        The validated string

    Raises:
        ValueError: If the input is not a string of '0'/'1'
    """
    if not isinstance(bits, str):
        raise ValueError(f"Bitstring must be str, got {type(bits)}")

    if set(bits) - {"0", "1"}:
        raise ValueError(f"Bitstring may only contain '0' and '1': {bits!r}")

    return bits


def validate_sector(L: int, N: int) -> None:
    """
    Validate a physical sector 0 <= N <= (L + 1) / 2.

    Raises:
        InvalidSectorError: If the sector is not admissible
    """
    if L < 0 or N < 0 or 2 * N > L + 1:
        raise InvalidSectorError(L, N)


def validate_time_grid(t_grid: Any) -> np.ndarray:
    """
    Validate a time grid.

    Returns:
        The grid as a 1D float array

    Raises:
        ValueError: If the grid is empty, not 1D, or not strictly increasing
    """
    grid = np.asarray(t_grid, dtype=float)

    if grid.ndim != 1:
        raise ValueError(f"Time grid must be 1D, got shape {grid.shape}")

    if grid.size == 0:
        raise ValueError("Time grid is empty")

    if not np.isfinite(grid).all():
        raise ValueError("Time grid contains NaN or infinite values")

    if np.any(np.diff(grid) <= 0):
        raise ValueError("Time grid must be strictly increasing")

    return grid


def validate_orbitals(orbitals: Any, atol: float = 1e-10) -> np.ndarray:
    """
    Validate an L_tau x N orbital matrix with orthonormal columns.

    Raises:
        ValueError: If the matrix is not 2D or its columns are not orthonormal
    """
    orbitals = np.asarray(orbitals, dtype=complex)

    if orbitals.ndim != 2:
        raise ValueError(f"Orbitals must be 2D, got shape {orbitals.shape}")

    if orbitals.shape[1] > orbitals.shape[0]:
        raise ValueError(
            f"More orbitals than sites: {orbitals.shape[1]} > {orbitals.shape[0]}"
        )

    gram = orbitals.conj().T @ orbitals
    if not np.allclose(gram, np.eye(orbitals.shape[1]), atol=atol):
        raise ValueError("Orbital columns are not orthonormal")

    return orbitals
