"""Classical-diffusion prediction for late-time local densities."""

from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def diffusion_variance(N: int, L: int, D_const: float, t: ArrayLike) -> ArrayLike:
    """Density variance rho (1/l_d - 1/L) with domain size l_d = sqrt(D t)."""
    rho = N / L
    l_d = np.sqrt(D_const * np.asarray(t, dtype=float))
    return rho * (1.0 / l_d - 1.0 / L)


def diffusion_prediction(N: int, L: int, D_const: float, t: ArrayLike) -> ArrayLike:
    """
    Predicted mean of sqrt(<n_j>) for Gaussian density fluctuations.

    Args:
        N: Particle number
        L: Physical sites
        D_const: Diffusion constant
        t: Time or array of times

    Returns:
        sqrt(rho) * (1 - Var / (8 rho^2))

    Raises:
        ValueError: If D_const or any t is not positive
    """
    if D_const <= 0:
        raise ValueError(f"Diffusion constant must be positive, got {D_const}")
    if np.any(np.asarray(t) <= 0):
        raise ValueError("Times must be positive")
    if N < 1:
        raise ValueError(f"Need N >= 1, got {N}")

    rho = N / L
    prediction = np.sqrt(rho) * (1.0 - diffusion_variance(N, L, D_const, t) / (8.0 * rho**2))
    return float(prediction) if np.ndim(prediction) == 0 else prediction


def mean_sqrt_density(density: np.ndarray) -> float:
    """Site average of sqrt(<n_j>), the quantity the prediction describes."""
    return float(np.mean(np.sqrt(np.clip(density, 0.0, None))))
