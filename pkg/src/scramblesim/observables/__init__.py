"""Physical-basis observables from samples and correlation matrices."""

from scramblesim.observables.estimator import (
    density_estimate,
    correlation_estimate,
    local_contributions,
)
from scramblesim.observables.orbitals import (
    natural_orbitals,
    hamming_distance,
    overlap_chi,
    relaxation_Z,
    scrambling_diagnostics,
    jackknife_stderr,
)
from scramblesim.observables.momentum import (
    momentum_grid,
    momentum_distribution,
    momentum_distribution_stderr,
    structure_factor,
    luttinger_K,
)
from scramblesim.observables.diffusion import (
    diffusion_prediction,
    diffusion_variance,
    mean_sqrt_density,
)

__all__ = [
    "density_estimate",
    "correlation_estimate",
    "local_contributions",
    "natural_orbitals",
    "hamming_distance",
    "overlap_chi",
    "relaxation_Z",
    "scrambling_diagnostics",
    "jackknife_stderr",
    "momentum_grid",
    "momentum_distribution",
    "momentum_distribution_stderr",
    "structure_factor",
    "luttinger_K",
    "diffusion_prediction",
    "diffusion_variance",
    "mean_sqrt_density",
]
