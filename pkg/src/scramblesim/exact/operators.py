"""Many-body hopping Hamiltonians on enumerated sectors."""

from functools import cached_property
from math import comb
from typing import Tuple

import numpy as np
import structlog
from scipy.linalg import eigh

from scramblesim.config.defaults import DEFAULT_MAX_SECTOR_DIM
from scramblesim.exceptions.errors import SectorTooLargeError
from scramblesim.mapping.basis import ConstrainedBasis, SectorBasis
from scramblesim.utils.validators import validate_sector

logger = structlog.get_logger(__name__)

HERMITICITY_TOLERANCE = 1e-12


class ManyBodyOperator:
    """
    Hermitian operator on an enumerated basis.

    The dense eigendecomposition is computed on first use and reused for
    every later evolution or OTOC evaluation.

    Attributes:
        basis: Enumerated sector
        matrix: Dense (dim, dim) Hermitian matrix
    """

    def __init__(self, basis: SectorBasis, matrix: np.ndarray):
        if matrix.shape != (basis.dimension, basis.dimension):
            raise ValueError(
                f"Matrix shape {matrix.shape} does not match basis dimension {basis.dimension}"
            )
        error = np.max(np.abs(matrix - matrix.conj().T), initial=0.0)
        if error > HERMITICITY_TOLERANCE:
            raise ValueError(f"Operator is not Hermitian (max deviation {error:.2e})")
        self.basis = basis
        self.matrix = matrix

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @cached_property
    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        """(energies ascending, eigenvectors as columns)."""
        logger.debug("Diagonalizing", basis=repr(self.basis))
        return eigh(self.matrix)

    @property
    def energies(self) -> np.ndarray:
        return self.eigensystem[0]

    @property
    def vectors(self) -> np.ndarray:
        return self.eigensystem[1]

    def __repr__(self) -> str:
        return f"ManyBodyOperator({self.basis!r})"


def _check_dimension(basis_dim: int, max_dim: int) -> None:
    if basis_dim > max_dim:
        raise SectorTooLargeError(basis_dim, max_dim)


def hopping_operator(basis: SectorBasis) -> ManyBodyOperator:
    """
    Nearest-neighbor hopping sum_j (c_j^dag c_j+1 + h.c.) on an open chain.

    Hops whose result is absent from ``basis`` (for a constrained basis,
    hops onto a neighbor of another particle) are dropped, which applies
    the projector on both sides. Neighboring hops cross no particle, so
    every element is +1.
    """
    dim = basis.dimension
    matrix = np.zeros((dim, dim))
    columns = np.arange(dim)
    one = np.uint64(1)
    for j in range(basis.length - 1):
        site = np.uint64(j)
        movable = ((basis.bits >> site) ^ (basis.bits >> (site + one))) & one
        flipped = basis.bits ^ (np.uint64(3) << site)
        targets = basis.lookup(flipped)
        valid = (movable == 1) & (targets >= 0)
        matrix[targets[valid], columns[valid]] = 1.0
    return ManyBodyOperator(basis, matrix)


def build_physical_hamiltonian(
    L: int,
    N: int,
    max_dim: int = DEFAULT_MAX_SECTOR_DIM,
) -> ManyBodyOperator:
    """
    Constrained XX Hamiltonian P [sigma^+ sigma^- + h.c.] P on L sites.

    Raises:
        InvalidSectorError: If N > (L + 1) / 2
        SectorTooLargeError: If the sector dimension exceeds ``max_dim``
    """
    validate_sector(L, N)
    _check_dimension(comb(L + 1 - N, N), max_dim)
    return hopping_operator(ConstrainedBasis(L, N))


def build_free_hamiltonian(
    L: int,
    N: int,
    max_dim: int = DEFAULT_MAX_SECTOR_DIM,
) -> ManyBodyOperator:
    """Unconstrained XX chain in the N-particle sector."""
    _check_dimension(comb(L, N), max_dim)
    return hopping_operator(SectorBasis(L, N))


def logical_xx_hamiltonian(
    L_tau: int,
    N: int,
    max_dim: int = DEFAULT_MAX_SECTOR_DIM,
) -> ManyBodyOperator:
    """
    Logical spin chain sum_k (tau_k^+ tau_k+1^- + h.c.) in the N-up sector.

    Jordan-Wigner maps it to free fermions, so its spectrum is the set of
    N-fold sums of single-particle energies.
    """
    return build_free_hamiltonian(L_tau, N, max_dim=max_dim)
