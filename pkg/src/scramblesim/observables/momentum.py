"""Momentum-space observables: n(k), S(k) and the Luttinger parameter."""

from typing import Optional, Tuple

import numpy as np

from scramblesim.analysis.fits import fit_luttinger
from scramblesim.config.defaults import DEFAULT_LUTTINGER_POINTS
from scramblesim.core.result import CorrelationMatrix, SampleBatch
from scramblesim.exceptions.errors import EmptyBatchError


def momentum_grid(L: int) -> np.ndarray:
    """k = 2 pi q / L for q = 0..L-1 (periodic convention on the open chain)."""
    return 2.0 * np.pi * np.arange(L) / L


def _fourier_matrix(L: int) -> np.ndarray:
    sites = np.arange(L)
    return np.exp(-1j * np.outer(momentum_grid(L), sites))


def momentum_distribution(corr: CorrelationMatrix) -> np.ndarray:
    """
    n(k) = (1/L) sum_{j,j'} exp(-i k (j - j')) <c_j^dag c_j'>.

    Returns:
        Real array over :func:`momentum_grid`; sums to the trace
    """
    L = corr.dim
    F = _fourier_matrix(L)
    hermitian = 0.5 * (corr.entries + corr.entries.conj().T)
    n_k = np.einsum("qj,jl,ql->q", F, hermitian, F.conj()) / L
    return n_k.real


def momentum_distribution_stderr(corr: CorrelationMatrix) -> Optional[np.ndarray]:
    """Jackknife errors of n(k) from the replicas of an estimated matrix."""
    if corr.replicas is None:
        return None
    L = corr.dim
    F = _fourier_matrix(L)
    replicas = np.einsum("qj,bjl,ql->bq", F, corr.replicas, F.conj()).real / L
    n = len(replicas)
    spread = ((replicas - replicas.mean(axis=0)) ** 2).sum(axis=0)
    return np.sqrt((n - 1) / n * spread)


def structure_factor(batch: SampleBatch, physical: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """
    Static structure factor S(k) = (1/L) <|sum_j exp(i k j) (n_j - rho)|^2>.

    Args:
        batch: Samples (diagonal observable, no amplitudes needed)
        physical: Use physical occupations; False uses the logical chain

    Returns:
        (k, S_k) over the momentum grid of the chosen chain

    Raises:
        EmptyBatchError: If the batch has no samples
    """
    if batch.M_s == 0:
        raise EmptyBatchError()
    occupations = batch.occupations(physical=physical).astype(float)
    L = occupations.shape[1]
    fluctuations = occupations - batch.N / L
    amplitudes = np.fft.fft(fluctuations, axis=1)
    S_k = np.mean(np.abs(amplitudes) ** 2, axis=0) / L
    return momentum_grid(L), S_k


def luttinger_K(
    k: np.ndarray,
    S_k: np.ndarray,
    n_points: int = DEFAULT_LUTTINGER_POINTS,
) -> float:
    """
    Luttinger parameter K = 2 pi * dS/dk over the smallest nonzero momenta.

    Raises:
        FitFailureError: If the fitted slope is not positive
    """
    return fit_luttinger(k, S_k, n_points=n_points)["K"]
