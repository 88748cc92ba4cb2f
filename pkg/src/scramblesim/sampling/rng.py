"""Counter-based random streams keyed by (seed, index)."""

from typing import Sequence

import numpy as np


def stream(seed: int, *keys: int) -> np.random.Generator:
    """
    Independent Philox generator for a (seed, keys...) tuple.

    The stream depends only on its key, never on how many other streams
    were drawn before, so batches are reproducible under any scheduling.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def sample_stream(seed: int, sample_index: int) -> np.random.Generator:
    return stream(seed, sample_index)


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit child seed for a (seed, keys...) tuple."""
    state = np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def random_product_sites(L_tau: int, N: int, seed: int, state_index: int) -> Sequence[int]:
    """Occupied sites of a uniformly random logical product state."""
    rng = stream(seed, state_index)
    return sorted(int(k) for k in rng.choice(L_tau, size=N, replace=False))
