"""Exact diagonalization references on enumerated sectors."""

from scramblesim.exact.operators import (
    ManyBodyOperator,
    hopping_operator,
    build_physical_hamiltonian,
    build_free_hamiltonian,
    logical_xx_hamiltonian,
)
from scramblesim.exact.evolution import (
    logical_manybody_spectrum,
    basis_state,
    evolve_exact,
    correlation_from_state,
    exact_correlation,
    physical_amplitudes_from_slater,
    hamming_distance_direct,
)
from scramblesim.exact.otoc import OTOCEngine, otoc, free_fermion_otoc_reference

__all__ = [
    "ManyBodyOperator",
    "hopping_operator",
    "build_physical_hamiltonian",
    "build_free_hamiltonian",
    "logical_xx_hamiltonian",
    "logical_manybody_spectrum",
    "basis_state",
    "evolve_exact",
    "correlation_from_state",
    "exact_correlation",
    "physical_amplitudes_from_slater",
    "hamming_distance_direct",
    "OTOCEngine",
    "otoc",
    "free_fermion_otoc_reference",
]
