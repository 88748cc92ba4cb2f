"""Sequential sampler of the projection determinantal point process K = U U^dag."""

import numpy as np

from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import NumericalUnderflowError
from scramblesim.sampling.base import BaseSampler

# Inclusion probabilities this close to 1 are treated as certain.
CERTAINTY_TOLERANCE = 1e-12


class DPPSampler(BaseSampler):
    """
    Site-by-site Bernoulli sampler with Gram-Schmidt kernel downdates.

    The conditional kernel on the not-yet-visited sites is kept as
    W W^dag with orthonormal columns W. Site i is included with
    probability ||W[i]||^2. Inclusion projects out the direction of
    W[i]; exclusion re-orthonormalizes the remaining rows.
    """

    @property
    def name(self) -> str:
        return "dpp"

    def sample_sites(self, state: SlaterState, rng: np.random.Generator) -> np.ndarray:
        W = np.array(state.orbitals)
        chosen = []

        for site in range(state.L_tau):
            rank = W.shape[1]
            if rank == 0:
                break
            if state.L_tau - site == rank:
                chosen.extend(range(site, state.L_tau))
                break

            row = W[0]
            p = float(np.vdot(row, row).real)
            if p > 1.0 - CERTAINTY_TOLERANCE or rng.random() < p:
                chosen.append(site)
                Q, _ = np.linalg.qr(row.conj()[:, None], mode="complete")
                W = (W @ Q[:, 1:])[1:]
            else:
                W, _ = np.linalg.qr(W[1:])

        if len(chosen) != state.N:
            raise NumericalUnderflowError(
                f"DPP draw selected {len(chosen)} of {state.N} particles"
            )
        return np.array(chosen, dtype=np.int64)
