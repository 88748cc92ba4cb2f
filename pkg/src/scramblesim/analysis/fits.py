"""
Deterministic curve fits for scrambling time scales.

Every fit uses a fixed initialization rule and records the data window it
used, so the same data always yields the same FitResult.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.optimize import least_squares
from scipy.stats import linregress

from scramblesim.config.defaults import (
    DEFAULT_LUTTINGER_POINTS,
    DEFAULT_LYAPUNOV_WINDOW,
    DEFAULT_OTOC_THRESHOLD,
    FIT_GRADIENT_TOL,
    FIT_MAX_ITERATIONS,
    FIT_MIN_ARCTAN_POINTS,
)
from scramblesim.core.result import FitResult
from scramblesim.exceptions.errors import FitFailureError

logger = structlog.get_logger(__name__)

Window = Optional[Tuple[float, float]]


def _select(x: np.ndarray, y: np.ndarray, window: Window):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"x and y must be 1D of equal length, got {x.shape} and {y.shape}")
    if window is None:
        return x, y
    keep = (x >= window[0]) & (x <= window[1])
    return x[keep], y[keep]


def _window_of(x: np.ndarray) -> Tuple[float, float]:
    return (float(x.min()), float(x.max())) if x.size else (np.nan, np.nan)


def _r_squared(y: np.ndarray, residuals: np.ndarray) -> float:
    total = np.sum((y - y.mean()) ** 2)
    if total == 0:
        return 1.0 if np.allclose(residuals, 0) else 0.0
    return float(1.0 - np.sum(residuals**2) / total)


def _linearized_covariance(jacobian: np.ndarray, residuals: np.ndarray) -> np.ndarray:
    n, p = jacobian.shape
    dof = max(n - p, 1)
    scale = np.sum(residuals**2) / dof
    return np.linalg.pinv(jacobian.T @ jacobian) * scale


def _regression_covariance(fit, x: np.ndarray) -> np.ndarray:
    """Covariance of (slope, intercept) from a linregress result."""
    var_slope = fit.stderr**2
    var_intercept = fit.intercept_stderr**2
    cov = -x.mean() * var_slope
    return np.array([[var_slope, cov], [cov, var_intercept]])


def fit_arctan(
    t: Sequence[float],
    D: Sequence[float],
    window: Window = None,
    gradient_tol: float = FIT_GRADIENT_TOL,
) -> FitResult:
    """
    Fit D(t) = D_inf * arctan(t / t_S) by Levenberg-Marquardt.

    Initialized at D_inf = max(D) and t_S = first time D reaches half
    its maximum.

    Args:
        t: Times
        D: Hamming distances
        window: Optional (t_min, t_max) restriction
        gradient_tol: Largest accepted max-norm of the cost gradient at the optimum

    Returns:
        FitResult with params D_inf and t_S

    Raises:
        ValueError: If fewer than 6 points or non-positive times are given
        FitFailureError: If the data is degenerate, LM does not converge or
            the final gradient is not below ``gradient_tol``
    """
    t, D = _select(t, D, window)
    if t.size < FIT_MIN_ARCTAN_POINTS:
        raise ValueError(f"arctan fit needs >= {FIT_MIN_ARCTAN_POINTS} points, got {t.size}")
    if np.any(t <= 0):
        raise ValueError("arctan fit needs positive times")

    peak = D.max()
    if not peak > 0:
        raise FitFailureError("arctan", "Degenerate data, max(D) <= 0")

    x0 = np.array([peak, t[np.argmax(D >= 0.5 * peak)]])

    def residuals(params):
        D_inf, t_S = params
        return D_inf * np.arctan(t / t_S) - D

    def jacobian(params):
        D_inf, t_S = params
        u = t / t_S
        return np.column_stack([np.arctan(u), -D_inf * u / t_S / (1.0 + u**2)])

    result = least_squares(
        residuals,
        x0,
        jac=jacobian,
        method="lm",
        xtol=1e-12,
        ftol=1e-12,
        gtol=1e-12,
        max_nfev=FIT_MAX_ITERATIONS,
    )
    if not result.success:
        raise FitFailureError("arctan", f"No convergence: {result.message}")
    gradient_norm = float(np.linalg.norm(result.grad, np.inf))
    if not gradient_norm < gradient_tol:
        raise FitFailureError(
            "arctan", f"Gradient norm {gradient_norm:.3g} not below {gradient_tol:.3g}"
        )

    D_inf, t_S = result.x
    if t_S < 0:
        D_inf, t_S = -D_inf, -t_S
    res = result.fun
    logger.debug("arctan fit", D_inf=D_inf, t_S=t_S, nfev=result.nfev)

    return FitResult(
        model="arctan",
        params={"D_inf": float(D_inf), "t_S": float(t_S)},
        covariance=_linearized_covariance(jacobian([D_inf, t_S]), res),
        residual_norm=float(np.linalg.norm(res)),
        window=_window_of(t),
        residuals=res,
        r_squared=_r_squared(D, res),
        n_points=int(t.size),
        metadata={"gradient_norm": gradient_norm},
    )


def fit_powerlaw(
    t: Sequence[float],
    y: Sequence[float],
    window: Window = None,
) -> FitResult:
    """
    Fit y = A * t^b by linear regression of log y on log t.

    For 1 - Z(t) = sqrt(t_r / t) the exponent is -1/2 and t_r = A^(-1/b).

    Returns:
        FitResult with params exponent, intercept (ln A) and t_r

    Raises:
        FitFailureError: If the window has fewer than 2 points or any
            value in it is not positive
    """
    t, y = _select(t, y, window)
    if t.size < 2:
        raise FitFailureError("powerlaw", "Fewer than 2 points in window")
    if np.any(t <= 0) or np.any(y <= 0):
        raise FitFailureError("powerlaw", "Non-positive value in window")

    log_t, log_y = np.log(t), np.log(y)
    if np.ptp(log_t) == 0:
        raise FitFailureError("powerlaw", "All times identical")

    fit = linregress(log_t, log_y)
    b, a = float(fit.slope), float(fit.intercept)
    residuals = log_y - (a + b * log_t)

    cov_ba = _regression_covariance(fit, log_t) if t.size > 2 else np.zeros((2, 2))
    if b != 0:
        t_r = float(np.exp(-a / b))
        grad = np.array([t_r * a / b**2, -t_r / b])
        var_t_r = float(grad @ cov_ba @ grad)
    else:
        t_r, var_t_r = float("nan"), float("nan")

    covariance = np.zeros((3, 3))
    covariance[:2, :2] = cov_ba
    covariance[2, 2] = var_t_r

    return FitResult(
        model="powerlaw",
        params={"exponent": b, "intercept": a, "t_r": t_r},
        covariance=covariance,
        residual_norm=float(np.linalg.norm(residuals)),
        window=_window_of(t),
        residuals=residuals,
        r_squared=float(fit.rvalue**2) if np.ptp(log_y) > 0 else 1.0,
        n_points=int(t.size),
    )


def crossing_times(
    t: Sequence[float],
    G: np.ndarray,
    threshold: float = DEFAULT_OTOC_THRESHOLD,
) -> np.ndarray:
    """
    First time each column of G reaches ``threshold``, linearly interpolated.

    Args:
        t: Strictly increasing times, length n_t
        G: (n_t, n_sites) values

    Returns:
        Crossing time per site, NaN where the threshold is never reached
    """
    t = np.asarray(t, dtype=float)
    G = np.asarray(G, dtype=float)
    if np.any(np.diff(t) <= 0):
        raise ValueError("Time grid must be strictly increasing")

    times = np.full(G.shape[1], np.nan)
    for column in range(G.shape[1]):
        above = np.flatnonzero(G[:, column] >= threshold)
        if above.size == 0:
            continue
        i = above[0]
        if i == 0:
            times[column] = t[0]
            continue
        g0, g1 = G[i - 1, column], G[i, column]
        times[column] = t[i - 1] + (threshold - g0) * (t[i] - t[i - 1]) / (g1 - g0)
    return times


def extract_butterfly_velocity(
    t: Sequence[float],
    G: np.ndarray,
    sites: Sequence[int],
    source_site: int,
    threshold: float = DEFAULT_OTOC_THRESHOLD,
) -> FitResult:
    """
    Butterfly velocity from the OTOC light cone.

    Regresses the distance |j - source_site| on the first time G_j
    crosses ``threshold``; v_B is the slope.

    Raises:
        FitFailureError: If fewer than 3 sites cross or all cross together
    """
    sites = np.asarray(sites)
    times = crossing_times(t, G, threshold)
    valid = np.isfinite(times)
    if valid.sum() < 3:
        raise FitFailureError("butterfly", f"Only {int(valid.sum())} sites cross {threshold:g}")

    x = times[valid]
    d = np.abs(sites[valid] - source_site).astype(float)
    if np.ptp(x) == 0:
        raise FitFailureError("butterfly", "All crossings at the same time")

    fit = linregress(x, d)
    residuals = d - (fit.intercept + fit.slope * x)
    return FitResult(
        model="butterfly",
        params={"v_B": float(fit.slope), "intercept": float(fit.intercept)},
        covariance=_regression_covariance(fit, x) if x.size > 2 else np.zeros((2, 2)),
        residual_norm=float(np.linalg.norm(residuals)),
        window=_window_of(x),
        residuals=residuals,
        r_squared=float(fit.rvalue**2),
        n_points=int(x.size),
        metadata={
            "threshold": threshold,
            "sites": sites[valid].tolist(),
            "crossing_times": x.tolist(),
        },
    )


def fit_lyapunov(
    t: Sequence[float],
    G: np.ndarray,
    sites: Sequence[int],
    source_site: int,
    v_B: float,
    window: Tuple[float, float] = DEFAULT_LYAPUNOV_WINDOW,
) -> FitResult:
    """
    Early-time exponential growth of the OTOC, pooled over sites.

    Points with G inside ``window`` are collapsed onto the shifted time
    t - |j - i| / v_B and log10 G is regressed on it.

    Returns:
        FitResult with lambda_L (slope of log10 G), rate (ln 10 * slope)
        and intercept

    Raises:
        FitFailureError: If fewer than 3 points lie in the window or the
            pooled slope is not positive
    """
    if v_B <= 0:
        raise ValueError(f"v_B must be positive, got {v_B}")
    t = np.asarray(t, dtype=float)
    G = np.asarray(G, dtype=float)
    distances = np.abs(np.asarray(sites) - source_site)

    shifted = t[:, None] - distances[None, :] / v_B
    inside = (G >= window[0]) & (G <= window[1])
    if inside.sum() < 3:
        raise FitFailureError("lyapunov", f"Only {int(inside.sum())} points in G window {window}")

    x = shifted[inside]
    y = np.log10(G[inside])
    if np.ptp(x) == 0:
        raise FitFailureError("lyapunov", "No spread in shifted time")

    fit = linregress(x, y)
    if not fit.slope > 0:
        raise FitFailureError("lyapunov", f"No growth in window (slope {fit.slope:.3g})")

    residuals = y - (fit.intercept + fit.slope * x)
    cov = _regression_covariance(fit, x) if x.size > 2 else np.zeros((2, 2))
    covariance = np.zeros((3, 3))
    covariance[:2, :2] = cov
    covariance[1, 1] = cov[0, 0] * np.log(10) ** 2
    covariance[0, 1] = covariance[1, 0] = cov[0, 0] * np.log(10)
    covariance[2, 2] = cov[1, 1]
    covariance[0, 2] = covariance[2, 0] = cov[0, 1]
    covariance[1, 2] = covariance[2, 1] = cov[0, 1] * np.log(10)

    return FitResult(
        model="lyapunov",
        params={
            "lambda_L": float(fit.slope),
            "rate": float(np.log(10) * fit.slope),
            "intercept": float(fit.intercept),
        },
        covariance=covariance,
        residual_norm=float(np.linalg.norm(residuals)),
        window=_window_of(x),
        residuals=residuals,
        r_squared=float(fit.rvalue**2),
        n_points=int(x.size),
        metadata={"G_window": list(window), "v_B": v_B},
    )


def fit_luttinger(
    k: Sequence[float],
    S_k: Sequence[float],
    n_points: int = DEFAULT_LUTTINGER_POINTS,
) -> FitResult:
    """
    K = 2 pi * slope of S(k) through the origin over the smallest k > 0.

    Raises:
        FitFailureError: If fewer than n_points momenta exist or slope <= 0
    """
    k, S_k = np.asarray(k, dtype=float), np.asarray(S_k, dtype=float)
    order = np.argsort(k)
    k, S_k = k[order], S_k[order]
    keep = (k > 0) & (k <= np.pi)
    k, S_k = k[keep][:n_points], S_k[keep][:n_points]
    if k.size < max(n_points, 1):
        raise FitFailureError("luttinger", f"Need {n_points} nonzero momenta, got {k.size}")

    slope = float(np.dot(k, S_k) / np.dot(k, k))
    if not slope > 0:
        raise FitFailureError("luttinger", f"Non-positive slope {slope:.3g}")

    residuals = S_k - slope * k
    dof = max(k.size - 1, 1)
    var_slope = np.sum(residuals**2) / dof / np.dot(k, k)
    covariance = np.array(
        [
            [(2 * np.pi) ** 2 * var_slope, 2 * np.pi * var_slope],
            [2 * np.pi * var_slope, var_slope],
        ]
    )
    uncentered = np.dot(S_k, S_k)

    return FitResult(
        model="luttinger",
        params={"K": 2.0 * np.pi * slope, "slope": slope},
        covariance=covariance,
        residual_norm=float(np.linalg.norm(residuals)),
        window=_window_of(k),
        residuals=residuals,
        r_squared=float(1.0 - np.sum(residuals**2) / uncentered) if uncentered else None,
        n_points=int(k.size),
    )


def fit_diffusion_constant(
    t: Sequence[float],
    mean_sqrt_n: Sequence[float],
    N: int,
    L: int,
    window: Window = None,
) -> FitResult:
    """
    Fit the diffusion constant of the late-time mean of sqrt(<n_j>).

    The fit runs on log D so the constant stays positive; the starting
    value is the median of the pointwise inversions of the prediction.

    Raises:
        FitFailureError: If the window is empty or LM does not converge
    """
    from scramblesim.observables.diffusion import diffusion_prediction

    t, y = _select(t, mean_sqrt_n, window)
    if t.size < 2:
        raise FitFailureError("diffusion", "Fewer than 2 points in window")
    if np.any(t <= 0):
        raise ValueError("Diffusion fit needs positive times")

    rho = N / L
    variance = 8.0 * rho**2 * (1.0 - y / np.sqrt(rho))
    inverse_l_d = variance / rho + 1.0 / L
    pointwise = 1.0 / (inverse_l_d[inverse_l_d > 0] ** 2 * t[inverse_l_d > 0])
    x0 = np.log(np.median(pointwise)) if pointwise.size else 0.0

    def residuals(params):
        return diffusion_prediction(N, L, float(np.exp(params[0])), t) - y

    result = least_squares(residuals, [x0], method="lm", max_nfev=FIT_MAX_ITERATIONS)
    if not result.success:
        raise FitFailureError("diffusion", f"No convergence: {result.message}")

    D_const = float(np.exp(result.x[0]))
    res = result.fun
    cov_log = _linearized_covariance(result.jac, res)

    return FitResult(
        model="diffusion",
        params={"D_const": D_const},
        covariance=cov_log * D_const**2,
        residual_norm=float(np.linalg.norm(res)),
        window=_window_of(t),
        residuals=res,
        r_squared=_r_squared(y, res),
        n_points=int(t.size),
    )
