"""Natural orbitals and the scrambling diagnostics built on them."""

from typing import Optional

import numpy as np
import structlog

from scramblesim.core.result import (
    CorrelationMatrix,
    NaturalOrbitalSpectrum,
    ScramblingDiagnostics,
)

logger = structlog.get_logger(__name__)


def _sorted_occupations(entries: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of the Hermitian part, clipped to [0, 1]."""
    hermitian = 0.5 * (entries + np.conj(np.swapaxes(entries, -1, -2)))
    return np.clip(np.linalg.eigvalsh(hermitian)[..., ::-1], 0.0, 1.0)


def natural_orbitals(corr: CorrelationMatrix) -> NaturalOrbitalSpectrum:
    """
    Diagonalize a correlation matrix.

    Eigenvalues are sorted descending and clipped to [0, 1]; the total
    amount removed by clipping is reported as ``clip_mass``.
    """
    hermitian = 0.5 * (corr.entries + corr.entries.conj().T)
    values, vectors = np.linalg.eigh(hermitian)
    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]

    clipped = np.clip(values, 0.0, 1.0)
    clip_mass = float(np.abs(values - clipped).sum())
    if clip_mass > 0:
        logger.debug("Natural occupations clipped", clip_mass=clip_mass, time=corr.time)

    return NaturalOrbitalSpectrum(
        lambdas=clipped, vectors=vectors, time=corr.time, clip_mass=clip_mass
    )


def overlap_chi(lambdas: np.ndarray, N: int) -> float:
    """chi = (1/N) * sum of the N largest occupations."""
    if N == 0:
        return 1.0
    return float(np.sum(np.asarray(lambdas)[..., :N], axis=-1) / N)


def hamming_distance(spectrum: NaturalOrbitalSpectrum, N: int) -> float:
    """
    Hamming distance D = 2 (N - sum of the N largest occupations).

    Returns:
        D in [0, 2N]
    """
    D = 2.0 * (N - float(np.sum(spectrum.lambdas[:N])))
    return float(np.clip(D, 0.0, 2.0 * N))


def relaxation_Z(
    spectrum_t: NaturalOrbitalSpectrum,
    spectrum_inf: NaturalOrbitalSpectrum,
    N: int,
) -> float:
    """
    Relaxation overlap Z = (1/N) sum_l sqrt(lambda_l(t) lambda_l(inf)).

    Raises:
        ValueError: If the spectra have different dimensions or N < 1
    """
    if spectrum_t.lambdas.shape != spectrum_inf.lambdas.shape:
        raise ValueError(
            f"Spectra differ in dimension: {spectrum_t.lambdas.shape} vs {spectrum_inf.lambdas.shape}"
        )
    if N < 1:
        raise ValueError(f"Z needs N >= 1, got {N}")
    return float(np.sum(np.sqrt(spectrum_t.lambdas * spectrum_inf.lambdas)) / N)


def jackknife_stderr(values: np.ndarray) -> float:
    """Standard error from leave-one-block-out replica values."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n < 2:
        return 0.0
    return float(np.sqrt((n - 1) / n * np.sum((values - values.mean()) ** 2)))


def scrambling_diagnostics(
    corr: CorrelationMatrix,
    N: int,
    corr_inf: Optional[CorrelationMatrix] = None,
) -> ScramblingDiagnostics:
    """
    D, chi and (with a long-time reference) Z at the time of ``corr``.

    Standard errors come from the jackknife replicas of the estimated
    matrices; exact matrices give no error.
    """
    spectrum = natural_orbitals(corr)
    D = hamming_distance(spectrum, N)
    chi = overlap_chi(spectrum.lambdas, N)

    D_stderr = None
    if corr.replicas is not None:
        replica_lambdas = _sorted_occupations(corr.replicas)
        D_replicas = 2.0 * (N - replica_lambdas[:, :N].sum(axis=1))
        D_stderr = jackknife_stderr(D_replicas)

    Z = Z_stderr = None
    if corr_inf is not None and N > 0:
        spectrum_inf = natural_orbitals(corr_inf)
        Z = relaxation_Z(spectrum, spectrum_inf, N)
        Z_stderr = _z_stderr(corr, corr_inf, spectrum, spectrum_inf, N)

    return ScramblingDiagnostics(
        D=D,
        chi=chi,
        Z=Z,
        time=corr.time,
        D_stderr=D_stderr,
        Z_stderr=Z_stderr,
        lambdas=spectrum.lambdas,
        density=np.real(np.diag(corr.entries)),
    )


def _replica_lambdas(corr: CorrelationMatrix, spectrum: NaturalOrbitalSpectrum) -> np.ndarray:
    if corr.replicas is None:
        return spectrum.lambdas[None, :]
    return _sorted_occupations(corr.replicas)


def _z_stderr(
    corr: CorrelationMatrix,
    corr_inf: CorrelationMatrix,
    spectrum: NaturalOrbitalSpectrum,
    spectrum_inf: NaturalOrbitalSpectrum,
    N: int,
) -> Optional[float]:
    lam_t = _replica_lambdas(corr, spectrum)
    lam_inf = _replica_lambdas(corr_inf, spectrum_inf)
    if len(lam_t) == 1 and len(lam_inf) == 1:
        return None
    # Replicas are paired by block; an exact side is held fixed.
    n = min(len(a) for a in (lam_t, lam_inf) if len(a) > 1)
    Z_replicas = np.sqrt(lam_t[:n] * lam_inf[:n]).sum(axis=1) / N
    return jackknife_stderr(Z_replicas)
