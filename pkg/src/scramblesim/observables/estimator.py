"""
Physical one-body correlations estimated from logical samples.

For a sampled physical configuration n' occupied at j' and a target site
j, the connected configuration n = c_j^dag c_j' n' contributes

    (-1)^(particles strictly between j and j') * conj(Psi(n) / Psi(n'))

to <c_j^dag c_j'>, where Psi(n) is the logical Slater amplitude of
physical_to_logical(n). Moves that break the no-neighbor constraint
contribute nothing.

Moving the particle with sorted index i past p others shifts those p
logical coordinates by one site, so the ratio is the determinant of a
(p+1) x (p+1) block of G = U A^-1. Only the moved particle's row varies
with the target site, so each (i, p) pair needs one cofactor vector and
every target site costs a dot product.

Each off-diagonal pair (j, j') is estimated twice: once from samples
occupied at j' and once, conjugated, from samples occupied at j. The
reported entry takes the direction with more contributing samples; the
other one mostly holds rare large ratios. Errors come from the same
combination of jackknife replicas.
"""

import time

import numpy as np
import structlog

from scramblesim.config.defaults import (
    AMPLITUDE_FLOOR,
    DEFAULT_JACKKNIFE_BLOCKS,
    DEFAULT_MAX_SKIP_FRACTION,
)
from scramblesim.core.result import CorrelationMatrix, DensityEstimate, SampleBatch
from scramblesim.dynamics.amplitudes import SlaterRatioEvaluator
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import (
    DegenerateAmplitudeError,
    EmptyBatchError,
    SectorMismatchError,
)
from scramblesim.mapping.bijection import logical_to_physical, physical_to_logical
from scramblesim.mapping.configs import LogicalConfig, PhysicalConfig, has_adjacent_pair

logger = structlog.get_logger(__name__)

# Complex entries of G held per chunk of samples.
_CHUNK_ELEMENTS = 1 << 22


def density_estimate(batch: SampleBatch) -> DensityEstimate:
    """
    Physical site occupations <n_j> with standard errors.

    Raises:
        EmptyBatchError: If the batch has no samples
    """
    if batch.M_s == 0:
        raise EmptyBatchError()
    occupations = batch.occupations(physical=True).astype(float)
    mean = occupations.mean(axis=0)
    if batch.M_s > 1:
        stderr = occupations.std(axis=0, ddof=1) / np.sqrt(batch.M_s)
    else:
        stderr = np.zeros_like(mean)
    return DensityEstimate(mean=mean, stderr=stderr, n_samples=batch.M_s)


def local_contributions(state: SlaterState, m: LogicalConfig) -> np.ndarray:
    """
    Contribution of one sample to the physical correlation matrix.

    Walks every single-particle move of the physical configuration
    explicitly. The batched estimator computes the same quantity.

    Returns:
        L x L complex matrix whose sample mean estimates <c_j^dag c_j'>
    """
    n = logical_to_physical(m)
    L = n.length
    evaluator = SlaterRatioEvaluator(state, m)
    occupied = n.sites

    out = np.zeros((L, L), dtype=complex)
    diagonal = np.array(occupied, dtype=np.int64)
    out[diagonal, diagonal] = 1.0

    for source in occupied:
        for target in range(L):
            if n.is_occupied(target):
                continue
            bits = (n.bits & ~(1 << source)) | (1 << target)
            if has_adjacent_pair(bits):
                continue
            moved = physical_to_logical(PhysicalConfig(bits, L))
            lo, hi = sorted((source, target))
            crossed = sum(1 for j in occupied if lo < j < hi)
            out[target, source] += (-1) ** crossed * np.conj(evaluator.ratio(moved))
    return out


def _green_functions(U: np.ndarray, K: np.ndarray) -> np.ndarray:
    """G_s = U A_s^-1 for every row of logical sites K, shape (s, L_tau, N)."""
    A = U[K]
    rhs = np.broadcast_to(U.T, (K.shape[0],) + U.T.shape)
    return np.swapaxes(np.linalg.solve(np.swapaxes(A, 1, 2), rhs), 1, 2)


def _last_row_cofactors(R: np.ndarray) -> np.ndarray:
    """
    Cofactor vectors kappa with det [R_s; g] = g . kappa_s.

    Args:
        R: (s, p, p + 1) stack of fixed rows

    Returns:
        (s, p + 1) cofactor vectors, zero where R is rank deficient
    """
    s, p, _ = R.shape
    if p == 0:
        return np.ones((s, 1), dtype=complex)
    Q, _ = np.linalg.qr(np.conj(np.swapaxes(R, 1, 2)), mode="complete")
    w = Q[..., -1]
    completed = np.concatenate([R, np.conj(w)[:, None, :]], axis=1)
    return np.linalg.det(completed)[:, None] * w


class _MoveAccumulator:
    """Per-block sums of local contributions, flattened over (block, j, j').

    ``hits`` counts the samples that contributed to each (j, j').
    """

    def __init__(self, n_blocks: int, L: int):
        self.L = L
        self.sums = np.zeros(n_blocks * L * L, dtype=complex)
        self.hits = np.zeros(L * L, dtype=np.int64)

    def deposit(
        self,
        G: np.ndarray,
        sel: np.ndarray,
        blocks: np.ndarray,
        kappa: np.ndarray,
        first_col: int,
        lo: np.ndarray,
        hi: np.ndarray,
        offset: int,
        source: np.ndarray,
        sign: int,
    ) -> None:
        ks = np.arange(lo.min(), hi.max() + 1)
        width = kappa.shape[1]
        rows = G[sel[:, None], ks[None, :], first_col : first_col + width]
        values = sign * np.conj(np.einsum("skc,sc->sk", rows, kappa))

        mask = (ks[None, :] >= lo[:, None]) & (ks[None, :] <= hi[:, None])
        target = ks[None, :] + offset
        pair = target * self.L + source[:, None]
        flat = blocks[sel][:, None] * self.L * self.L + pair
        np.add.at(self.sums, flat[mask], values[mask])
        np.add.at(self.hits, pair[mask], 1)

    def add_diagonal(self, blocks: np.ndarray, physical: np.ndarray) -> None:
        flat = (blocks[:, None] * self.L + physical) * self.L + physical
        np.add.at(self.sums, flat.ravel(), 1.0)


def _accumulate_chunk(
    acc: _MoveAccumulator,
    U: np.ndarray,
    K: np.ndarray,
    blocks: np.ndarray,
) -> None:
    s, N = K.shape
    L_tau = U.shape[0]
    acc.add_diagonal(blocks, K + np.arange(N))
    if N == 0:
        return

    G = _green_functions(U, K)
    samples = np.arange(s)
    # Row a holds G at k_a + 1 (right moves) or k_a - 1 (left moves);
    # clipped rows are never used by an admissible move.
    shifted_up = G[samples[:, None], np.minimum(K + 1, L_tau - 1)]
    shifted_down = G[samples[:, None], np.maximum(K - 1, 0)]
    right_edge = np.concatenate([K, np.full((s, 1), L_tau)], axis=1)
    left_edge = np.concatenate([np.full((s, 1), -1), K], axis=1)

    for i in range(N):
        source = K[:, i] + i

        # Right past p particles: the mover ends at sorted index i + p.
        for p in range(N - i):
            end = i + p
            lo = K[:, i] + 1 if p == 0 else K[:, end] + 2
            hi = right_edge[:, end + 1] - 1
            sel = np.flatnonzero(hi >= lo)
            if sel.size == 0:
                continue
            kappa = _last_row_cofactors(shifted_up[sel, i + 1 : end + 1, i : end + 1])
            acc.deposit(
                G, sel, blocks, kappa, i, lo[sel], hi[sel], end, source[sel], (-1) ** p
            )

        # Left past p particles: the mover ends at sorted index i - p and its
        # row comes first in the block; that reordering cancels the string sign.
        for p in range(i + 1):
            end = i - p
            lo = left_edge[:, end] + 1
            hi = K[:, i] - 1 if p == 0 else K[:, end] - 2
            sel = np.flatnonzero(hi >= lo)
            if sel.size == 0:
                continue
            kappa = _last_row_cofactors(shifted_down[sel, end:i, end : i + 1])
            acc.deposit(G, sel, blocks, kappa, end, lo[sel], hi[sel], end, source[sel], 1)


def _jackknife(sums: np.ndarray, counts: np.ndarray):
    """Mean and leave-one-block-out replicas of block sums."""
    keep = counts > 0
    sums, counts = sums[keep], counts[keep]
    total = sums.sum(axis=0)
    n = counts.sum()
    mean = total / n
    if len(counts) < 2:
        return mean, None
    replicas = (total[None] - sums) / (n - counts)[:, None, None]
    return mean, replicas


def _jackknife_stderr(replicas: np.ndarray) -> np.ndarray:
    n_blocks = replicas.shape[0]
    spread = np.abs(replicas - replicas.mean(axis=0)) ** 2
    return np.sqrt((n_blocks - 1) / n_blocks * spread.sum(axis=0))


def _direction_weights(hits: np.ndarray) -> np.ndarray:
    """
    Weight of the (j, j') direction against the conjugated (j', j) one.

    1 where (j, j') has more contributing samples, 0 where it has fewer and
    1/2 on ties and the diagonal. w + w.T = 1, so the combination is Hermitian.
    """
    w = np.full(hits.shape, 0.5)
    w[hits > hits.T] = 1.0
    w[hits < hits.T] = 0.0
    return w


def _combine_directions(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    return w * a + (1.0 - w) * np.conj(np.swapaxes(a, -1, -2))


def correlation_estimate(
    state: SlaterState,
    batch: SampleBatch,
    n_blocks: int = DEFAULT_JACKKNIFE_BLOCKS,
    max_skip_fraction: float = DEFAULT_MAX_SKIP_FRACTION,
) -> CorrelationMatrix:
    """
    Estimate the physical correlation matrix <c_j^dag c_j'>.

    Args:
        state: Slater state the batch was drawn from
        batch: Logical samples
        n_blocks: Jackknife blocks
        max_skip_fraction: Largest tolerated fraction of degenerate samples

    Returns:
        Hermitian L x L CorrelationMatrix with jackknife errors and replicas

    Raises:
        EmptyBatchError: If the batch has no samples
        SectorMismatchError: If batch and state disagree on L_tau or N
        DegenerateAmplitudeError: If too many samples have vanishing amplitude
    """
    if batch.M_s == 0:
        raise EmptyBatchError()
    if batch.L_tau != state.L_tau or batch.N != state.N:
        raise SectorMismatchError(
            f"Batch (L_tau={batch.L_tau}, N={batch.N}) does not match state "
            f"(L_tau={state.L_tau}, N={state.N})"
        )

    start_time = time.time()
    U = state.orbitals
    K = batch.sites
    M = batch.M_s
    L = batch.L

    n_blocks = max(1, min(n_blocks, M))
    blocks = (np.arange(M) * n_blocks) // M

    if state.N:
        _, logabs = np.linalg.slogdet(U[K])
        usable = logabs >= np.log(AMPLITUDE_FLOOR)
    else:
        usable = np.ones(M, dtype=bool)
    skipped = int(M - usable.sum())
    if skipped:
        logger.warning("Skipping degenerate samples", skipped=skipped, M_s=M)
    if skipped > max_skip_fraction * M:
        raise DegenerateAmplitudeError(
            f"{skipped} of {M} samples have vanishing amplitude "
            f"(limit {max_skip_fraction:.1%})"
        )

    K, blocks = K[usable], blocks[usable]
    acc = _MoveAccumulator(n_blocks, L)
    chunk = max(1, _CHUNK_ELEMENTS // max(1, state.L_tau * max(1, state.N)))
    for start in range(0, len(K), chunk):
        _accumulate_chunk(acc, U, K[start : start + chunk], blocks[start : start + chunk])

    counts = np.bincount(blocks, minlength=n_blocks)
    mean, replicas = _jackknife(acc.sums.reshape(n_blocks, L, L), counts)
    weights = _direction_weights(acc.hits.reshape(L, L))
    entries = _combine_directions(mean, weights)
    if replicas is not None:
        replicas = _combine_directions(replicas, weights)
        stderr = _jackknife_stderr(replicas)
    else:
        stderr = np.zeros(entries.shape)

    logger.debug(
        "Correlation estimated",
        L=L,
        N=state.N,
        M_s=M,
        skipped=skipped,
        elapsed=f"{time.time() - start_time:.3f}s",
    )
    return CorrelationMatrix(
        entries=entries,
        time=state.time,
        basis="physical",
        stderr=stderr,
        replicas=replicas,
        n_samples=M - skipped,
        skipped=skipped,
    )
