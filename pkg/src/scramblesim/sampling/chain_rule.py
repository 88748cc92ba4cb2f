"""
Chain-rule sampler over random column orderings.

A uniform permutation v of the N orbitals is drawn, then rows x_1..x_N
one at a time with P(x_k | x_<k; v_<=k) proportional to
|det U[x_1..x_k, v_1..v_k]|^2. Averaged over v the law of the row set
is exactly |det U[m rows]|^2.
"""

from itertools import permutations
from math import factorial
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from scramblesim.config.defaults import (
    AMPLITUDE_FLOOR,
    DEFAULT_CHAIN_RULE_METHOD,
    SUPPORTED_CHAIN_RULE_METHODS,
)
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import NumericalUnderflowError, SectorMismatchError
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.sampling.base import BaseSampler

LOG_WEIGHT_FLOOR = np.log(AMPLITUDE_FLOOR)


def _naive_log_weights(U: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """log |det U[rows + [x], cols]|^2 for every x, by batched LU."""
    L_tau = U.shape[0]
    k = len(cols)
    blocks = np.empty((L_tau, k, k), dtype=U.dtype)
    blocks[:, : k - 1, :] = U[np.ix_(rows, cols)]
    blocks[:, k - 1, :] = U[:, cols]
    _, logabs = np.linalg.slogdet(blocks)
    return 2.0 * logabs


def _nullspace_weights(U: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """
    Weights proportional to |det U[rows + [x], cols]|^2.

    With F = U[rows, cols] ((k-1) x k) and w a unit vector spanning the
    null space of F, det [F; u] = c * (u . w) for a constant c, so every
    candidate costs one length-k dot product.
    """
    if len(rows) == 0:
        w = np.ones(1, dtype=U.dtype)
    else:
        F = U[np.ix_(rows, cols)]
        Q, _ = np.linalg.qr(F.conj().T, mode="complete")
        w = Q[:, -1]
    return np.abs(U[:, cols] @ w) ** 2


def conditional_weights(
    U: np.ndarray,
    rows: Sequence[int],
    cols: Sequence[int],
    method: str = DEFAULT_CHAIN_RULE_METHOD,
    normalize: bool = True,
) -> np.ndarray:
    """
    Conditional law of the next row given chosen rows and columns.

    Args:
        U: L_tau x N orbital matrix
        rows: Rows chosen so far, x_1..x_{k-1}
        cols: Columns v_1..v_k, one more than ``rows``
        method: "nullspace" (fast) or "naive" (log-determinants)
        normalize: Return probabilities instead of raw weights. Raw
            "naive" weights are |det|^2 exactly; raw "nullspace" weights
            are proportional to them.

    Returns:
        Length-L_tau array, zero at already chosen rows

    Raises:
        NumericalUnderflowError: If the total weight is below 1e-300
    """
    rows = list(rows)
    cols = list(cols)
    if len(cols) != len(rows) + 1:
        raise ValueError(f"Need one more column than rows, got {len(rows)} and {len(cols)}")

    if method == "nullspace":
        weights = _nullspace_weights(U, rows, cols)
        weights[rows] = 0.0
        total = weights.sum()
        if not total >= AMPLITUDE_FLOOR:
            raise NumericalUnderflowError(
                f"Conditional weights underflowed at step {len(cols)}"
            )
        return weights / total if normalize else weights

    if method == "naive":
        log_weights = _naive_log_weights(U, rows, cols)
        log_weights[rows] = -np.inf
        log_total = logsumexp(log_weights)
        if not log_total >= LOG_WEIGHT_FLOOR:
            raise NumericalUnderflowError(
                f"Conditional weights underflowed at step {len(cols)}"
            )
        if normalize:
            return np.exp(log_weights - log_total)
        return np.exp(log_weights)

    raise ValueError(
        f"Unknown chain-rule method: {method}. Supported: {SUPPORTED_CHAIN_RULE_METHODS}"
    )


def _draw_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    cumulative = np.cumsum(probabilities)
    u = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, u, side="right"))
    index = min(index, len(probabilities) - 1)
    # Skip zero-weight rows the search can land on through rounding.
    while probabilities[index] == 0.0 and index > 0:
        index -= 1
    return index


class ChainRuleSampler(BaseSampler):
    """
    Exact sampler of |Psi_m|^2 by the permutation chain rule.

    Args:
        method: "nullspace" uses one QR per step (O(N^4 + L_tau N^2) per
            sample); "naive" evaluates every candidate determinant
            (O(L_tau N^4) per sample) and is the reference path.
    """

    def __init__(
        self,
        method: str = DEFAULT_CHAIN_RULE_METHOD,
        show_progress: bool = False,
        **kwargs,
    ):
        if method not in SUPPORTED_CHAIN_RULE_METHODS:
            raise ValueError(
                f"Unknown chain-rule method: {method}. "
                f"Supported: {SUPPORTED_CHAIN_RULE_METHODS}"
            )
        self.method = method
        super().__init__(show_progress=show_progress, **kwargs)

    @property
    def name(self) -> str:
        return "chain_rule"

    def sample_sites(
        self,
        state: SlaterState,
        rng: np.random.Generator,
        order: Sequence[int] = None,
    ) -> np.ndarray:
        """
        Draw one configuration.

        Args:
            state: Slater state
            rng: Random generator
            order: Fixed column permutation v; drawn uniformly when omitted
        """
        U = state.orbitals
        N = state.N
        if N == 0:
            return np.zeros(0, dtype=np.int64)

        v = rng.permutation(N) if order is None else np.asarray(order)
        chosen = []
        for k in range(1, N + 1):
            probabilities = conditional_weights(U, chosen, v[:k], method=self.method)
            chosen.append(_draw_index(probabilities, rng))
        return np.sort(np.array(chosen, dtype=np.int64))


def sequence_probability(
    U: np.ndarray,
    rows: Sequence[int],
    cols: Sequence[int],
    method: str = "naive",
) -> float:
    """Probability that the chain rule with column order ``cols`` draws ``rows`` in order."""
    probability = 1.0
    for k in range(1, len(rows) + 1):
        weights = conditional_weights(U, rows[: k - 1], cols[:k], method=method)
        probability *= weights[rows[k - 1]]
    return float(probability)


def permutation_averaged_probability(
    state: SlaterState,
    m: LogicalConfig,
    max_particles: int = 6,
) -> float:
    """
    Probability of drawing m, averaged over all N! column orderings.

    Sums the chain-rule probability over every order in which m's rows
    can be drawn and averages over orderings v. Equals |Psi_m|^2.

    Raises:
        ValueError: If N exceeds ``max_particles``
    """
    if m.count != state.N or m.length != state.L_tau:
        raise SectorMismatchError(f"Configuration {m} does not match the state")
    if state.N > max_particles:
        raise ValueError(f"N={state.N} too large for the N! average (max {max_particles})")
    if state.N == 0:
        return 1.0

    rows = m.sites
    total = 0.0
    for cols in permutations(range(state.N)):
        for order in permutations(rows):
            try:
                total += sequence_probability(state.orbitals, list(order), list(cols))
            except NumericalUnderflowError:
                continue
    return total / factorial(state.N)
