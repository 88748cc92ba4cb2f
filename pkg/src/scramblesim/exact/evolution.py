"""Exact many-body evolution and brute-force observables."""

from itertools import combinations
from math import comb
from typing import Union

import numpy as np

from scramblesim.config.defaults import DEFAULT_EXACT_DISTRIBUTION_CAP
from scramblesim.core.result import CorrelationMatrix
from scramblesim.dynamics.hamiltonian import build_hamiltonian
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exact.operators import ManyBodyOperator
from scramblesim.exceptions.errors import SectorMismatchError, SectorTooLargeError
from scramblesim.mapping.basis import ConstrainedBasis, SectorBasis, enumerate_sector
from scramblesim.mapping.configs import BitConfig

NORM_TOLERANCE = 1e-8


def logical_manybody_spectrum(L_tau: int, N: int) -> np.ndarray:
    """
    Sorted N-fold sums of the single-particle energies 2 cos(q pi / (L_tau + 1)).

    Raises:
        ValueError: If N > L_tau
    """
    energies = build_hamiltonian(L_tau).analytic_energies()
    if N == 0:
        return np.zeros(1)
    return np.sort(energies[enumerate_sector(L_tau, N).sites].sum(axis=1))


def basis_state(basis: SectorBasis, config: Union[BitConfig, str]) -> np.ndarray:
    """
    Unit vector of one configuration.

    Raises:
        SectorMismatchError: If the configuration is not in the basis
    """
    index = basis.index(config)
    if index < 0:
        raise SectorMismatchError(f"Configuration {config} is not in {basis!r}")
    psi = np.zeros(basis.dimension, dtype=complex)
    psi[index] = 1.0
    return psi


def evolve_exact(H: ManyBodyOperator, psi0: np.ndarray, t: float) -> np.ndarray:
    """
    exp(-i H t) psi0 through the cached eigendecomposition.

    Raises:
        ValueError: If psi0 has the wrong length or is not normalized
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (H.dimension,):
        raise ValueError(f"State has shape {psi0.shape}, expected ({H.dimension},)")
    if abs(np.linalg.norm(psi0) - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"State is not normalized (norm {np.linalg.norm(psi0):.12f})")
    energies, vectors = H.eigensystem
    return vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ psi0))


def correlation_from_state(basis: SectorBasis, psi: np.ndarray, time: float = 0.0) -> CorrelationMatrix:
    """
    <psi| c_j^dag c_j' |psi> in the site-ordered fermion convention.

    Moving a particle from j' to j picks up (-1) per particle strictly
    between the two sites. Targets outside the basis are projected out.
    """
    L = basis.length
    occupations = basis.occupations
    cumulative = np.concatenate(
        [np.zeros((basis.dimension, 1), dtype=np.int64), np.cumsum(occupations, axis=1)],
        axis=1,
    )
    entries = np.zeros((L, L), dtype=complex)
    weights = np.abs(psi) ** 2
    entries[np.diag_indices(L)] = weights @ occupations

    one = np.uint64(1)
    for source in range(L):
        has_source = occupations[:, source] == 1
        for target in range(L):
            if target == source:
                continue
            movable = has_source & (occupations[:, target] == 0)
            if not movable.any():
                continue
            origins = np.flatnonzero(movable)
            moved = (basis.bits[origins] & ~(one << np.uint64(source))) | (
                one << np.uint64(target)
            )
            destinations = basis.lookup(moved)
            keep = destinations >= 0
            origins, destinations = origins[keep], destinations[keep]
            lo, hi = min(source, target), max(source, target)
            crossed = cumulative[origins, hi] - cumulative[origins, lo + 1]
            signs = 1 - 2 * (crossed % 2)
            entries[target, source] = np.sum(
                np.conj(psi[destinations]) * psi[origins] * signs
            )
    return CorrelationMatrix(entries=entries, time=time, basis="physical")


def exact_correlation(H: ManyBodyOperator, psi0: np.ndarray, t: float) -> CorrelationMatrix:
    """Physical correlation matrix of exp(-i H t) psi0."""
    return correlation_from_state(H.basis, evolve_exact(H, psi0, t), time=t)


def physical_amplitudes_from_slater(state: SlaterState, basis: ConstrainedBasis) -> np.ndarray:
    """
    Slater amplitudes carried to the physical basis through the bijection.

    Entry n is det U[rows of physical_to_logical(n)].
    """
    if basis.L_tau != state.L_tau or basis.n_particles != state.N:
        raise SectorMismatchError(
            f"State (L_tau={state.L_tau}, N={state.N}) does not match {basis!r}"
        )
    if state.N == 0:
        return np.ones(basis.dimension, dtype=complex)
    return np.linalg.det(state.orbitals[basis.logical_sites])


def hamming_distance_direct(
    corr: CorrelationMatrix,
    basis: SectorBasis,
    psi: np.ndarray,
    cap: int = DEFAULT_EXACT_DISTRIBUTION_CAP,
) -> float:
    """
    Hamming distance summed over the natural-orbital Fock basis.

    With natural orbitals v_l (descending occupation) and Fock states
    |S> = prod_{l in S} d_l^dag |0>, computes
    sum_S |<S|psi>|^2 * |S symmetric-difference {0..N-1}|.

    Raises:
        SectorTooLargeError: If C(L, N) exceeds ``cap``
    """
    L, N = basis.length, basis.n_particles
    if comb(L, N) > cap:
        raise SectorTooLargeError(comb(L, N), cap)

    hermitian = 0.5 * (corr.entries + corr.entries.conj().T)
    values, vectors = np.linalg.eigh(hermitian)
    vectors = vectors[:, np.argsort(values)[::-1]]

    reference = set(range(N))
    D = 0.0
    rows = vectors[basis.sites]
    for subset in combinations(range(L), N):
        overlap = np.sum(np.linalg.det(rows[:, :, list(subset)]) * psi) if N else np.sum(psi)
        D += abs(overlap) ** 2 * len(reference.symmetric_difference(subset))
    return float(D)
