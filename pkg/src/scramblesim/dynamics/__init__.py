"""Free-fermion logical dynamics."""

from scramblesim.dynamics.hamiltonian import HoppingHamiltonian, build_hamiltonian
from scramblesim.dynamics.slater import (
    SlaterState,
    initial_slater,
    evolve,
    ground_state_slater,
    ground_state_energy,
    logical_correlation,
    save_state,
    load_state,
)
from scramblesim.dynamics.amplitudes import (
    log_amplitude,
    amplitude,
    amplitude_ratio,
    SlaterRatioEvaluator,
)

__all__ = [
    "HoppingHamiltonian",
    "build_hamiltonian",
    "SlaterState",
    "initial_slater",
    "evolve",
    "ground_state_slater",
    "ground_state_energy",
    "logical_correlation",
    "save_state",
    "load_state",
    "log_amplitude",
    "amplitude",
    "amplitude_ratio",
    "SlaterRatioEvaluator",
]
