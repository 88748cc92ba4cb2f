"""Curve fits for scrambling time scales and velocities."""

from scramblesim.analysis.fits import (
    fit_arctan,
    fit_powerlaw,
    crossing_times,
    extract_butterfly_velocity,
    fit_lyapunov,
    fit_luttinger,
    fit_diffusion_constant,
)

__all__ = [
    "fit_arctan",
    "fit_powerlaw",
    "crossing_times",
    "extract_butterfly_velocity",
    "fit_lyapunov",
    "fit_luttinger",
    "fit_diffusion_constant",
]
