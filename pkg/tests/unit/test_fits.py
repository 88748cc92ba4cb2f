"""Tests for the time-scale fits."""

import pytest
import numpy as np

from scramblesim.analysis.fits import (
    crossing_times,
    extract_butterfly_velocity,
    fit_arctan,
    fit_diffusion_constant,
    fit_luttinger,
    fit_lyapunov,
    fit_powerlaw,
)
from scramblesim.exceptions.errors import FitFailureError
from scramblesim.observables.diffusion import diffusion_prediction


class TestArctanFit:
    """Tests for the D(t) = D_inf arctan(t / t_S) fit."""

    def test_recovers_parameters(self):
        """Test the fit on noiseless synthetic data."""
        t = np.geomspace(0.1, 100, 40)
        fit = fit_arctan(t, 3.0 * np.arctan(t / 2.0))

        assert fit["D_inf"] == pytest.approx(3.0, rel=1e-6)
        assert fit["t_S"] == pytest.approx(2.0, rel=1e-6)
        assert fit.residual_norm < 1e-8
        assert fit.n_points == 40
        assert fit.window == pytest.approx((0.1, 100.0))

    def test_window(self):
        """Test that the window restricts the data used."""
        t = np.geomspace(0.1, 100, 40)
        D = 3.0 * np.arctan(t / 2.0)
        D[t > 50] = 0.0
        fit = fit_arctan(t, D, window=(0.1, 50.0))

        assert fit["t_S"] == pytest.approx(2.0, rel=1e-6)
        assert fit.window[1] <= 50.0

    def test_too_few_points(self):
        """Test that five points are not enough."""
        t = np.linspace(1, 5, 5)
        with pytest.raises(ValueError):
            fit_arctan(t, np.arctan(t))

    def test_non_positive_times(self):
        """Test that t = 0 is rejected."""
        t = np.linspace(0, 5, 8)
        with pytest.raises(ValueError):
            fit_arctan(t, np.arctan(t))

    def test_degenerate_data(self):
        """Test that an all-zero D cannot be fitted."""
        with pytest.raises(FitFailureError) as excinfo:
            fit_arctan(np.linspace(1, 8, 8), np.zeros(8))

        assert excinfo.value.exit_code == 4
        assert "arctan" in str(excinfo.value)

    def test_noisy_data_meets_gradient_criterion(self):
        """Test that a converged fit on noisy data reports a tiny gradient."""
        t = np.geomspace(0.1, 100, 40)
        noise = np.random.default_rng(4).normal(scale=0.02, size=t.size)
        fit = fit_arctan(t, 3.0 * np.arctan(t / 2.0) + noise)

        assert fit.metadata["gradient_norm"] < 1e-8
        assert fit["D_inf"] == pytest.approx(3.0, rel=0.05)

    def test_gradient_criterion_enforced(self):
        """Test that a fit whose gradient is not below the tolerance fails."""
        t = np.geomspace(0.1, 100, 40)
        noise = np.random.default_rng(4).normal(scale=0.02, size=t.size)

        with pytest.raises(FitFailureError) as excinfo:
            fit_arctan(t, 3.0 * np.arctan(t / 2.0) + noise, gradient_tol=0.0)

        assert "Gradient norm" in str(excinfo.value)


class TestPowerlawFit:
    """Tests for the power-law fit of 1 - Z(t)."""

    def test_recovers_relaxation_time(self):
        """Test exponent -1/2 and t_r = A^2."""
        t = np.geomspace(1, 1000, 25)
        fit = fit_powerlaw(t, 0.7 * t**-0.5)

        assert fit["exponent"] == pytest.approx(-0.5)
        assert fit["intercept"] == pytest.approx(np.log(0.7))
        assert fit["t_r"] == pytest.approx(0.49)
        assert fit.r_squared == pytest.approx(1.0)

    def test_non_positive_values(self):
        """Test that a negative 1 - Z cannot be fitted on a log scale."""
        t = np.geomspace(1, 100, 5)
        with pytest.raises(FitFailureError):
            fit_powerlaw(t, np.array([0.5, 0.4, -0.1, 0.2, 0.1]))

    def test_empty_window(self):
        """Test that a window with one point fails."""
        t = np.geomspace(1, 100, 5)
        with pytest.raises(FitFailureError):
            fit_powerlaw(t, 1 / t, window=(50, 200))


class TestButterflyVelocity:
    """Tests for light-cone crossings and v_B."""

    def test_crossing_times_interpolated(self):
        """Test linear interpolation between grid points."""
        t = np.array([0.0, 1.0, 2.0])
        G = np.array([[0.0, 0.0, 0.0], [0.5, 2.0, 0.0], [1.5, 4.0, 0.0]])
        times = crossing_times(t, G, threshold=1.0)

        assert times[0] == pytest.approx(1.5)
        assert times[1] == pytest.approx(0.5)
        assert np.isnan(times[2])

    def test_crossing_times_grid(self):
        """Test that the grid must increase."""
        with pytest.raises(ValueError):
            crossing_times([0.0, 0.0], np.zeros((2, 1)))

    def test_recovers_velocity(self):
        """Test v_B on a synthetic light cone moving at speed 2."""
        t = np.linspace(0, 10, 1001)
        sites = np.arange(9)
        distances = np.abs(sites - 4)
        G = 1e-3 * np.exp(5.0 * (t[:, None] - distances[None, :] / 2.0))
        fit = extract_butterfly_velocity(t, G, sites, source_site=4)

        assert fit["v_B"] == pytest.approx(2.0, rel=1e-3)
        assert fit.n_points == 9
        assert fit.metadata["threshold"] == 1e-3

    def test_too_few_crossings(self):
        """Test that fewer than three crossings fail."""
        t = np.linspace(0, 1, 5)
        G = np.zeros((5, 4))
        G[:, 0] = np.linspace(0, 1, 5)
        with pytest.raises(FitFailureError):
            extract_butterfly_velocity(t, G, range(4), source_site=0)


class TestLyapunovFit:
    """Tests for the pooled early-growth fit."""

    def test_recovers_exponent(self):
        """Test lambda_L on data collapsed by v_B."""
        t = np.linspace(0, 8, 161)
        sites = np.arange(7)
        distances = np.abs(sites - 3)
        G = 1e-6 * 10 ** (1.5 * (t[:, None] - distances[None, :] / 2.0))
        fit = fit_lyapunov(t, G, sites, source_site=3, v_B=2.0)

        assert fit["lambda_L"] == pytest.approx(1.5)
        assert fit["rate"] == pytest.approx(1.5 * np.log(10))
        assert fit["intercept"] == pytest.approx(-6.0)
        assert fit.metadata["v_B"] == 2.0

    def test_invalid_velocity(self):
        """Test that v_B must be positive."""
        with pytest.raises(ValueError):
            fit_lyapunov([0.0, 1.0], np.zeros((2, 1)), [0], 0, v_B=0.0)

    def test_no_points_in_window(self):
        """Test failure when G never enters the window."""
        with pytest.raises(FitFailureError):
            fit_lyapunov(np.linspace(0, 1, 4), np.ones((4, 3)), range(3), 1, v_B=1.0)


class TestLuttingerFit:
    """Tests for K from the small-k slope of S(k)."""

    def test_linear_structure_factor(self):
        """Test K = 2 pi slope on S(k) = 0.1 k."""
        k = 2 * np.pi * np.arange(16) / 16
        fit = fit_luttinger(k, 0.1 * k, n_points=3)

        assert fit["K"] == pytest.approx(0.2 * np.pi)
        assert fit.n_points == 3
        assert fit.window[1] == pytest.approx(2 * np.pi * 3 / 16)

    def test_non_positive_slope(self):
        """Test that a flat S(k) fails."""
        k = 2 * np.pi * np.arange(16) / 16
        with pytest.raises(FitFailureError):
            fit_luttinger(k, np.zeros(16))

    def test_too_few_momenta(self):
        """Test that short grids fail."""
        k = 2 * np.pi * np.arange(4) / 4
        with pytest.raises(FitFailureError):
            fit_luttinger(k, k, n_points=4)


class TestDiffusionFit:
    """Tests for the diffusion-constant fit."""

    def test_recovers_constant(self):
        """Test D on the prediction itself."""
        t = np.geomspace(10, 1000, 20)
        y = diffusion_prediction(8, 64, 0.7, t)
        fit = fit_diffusion_constant(t, y, N=8, L=64)

        assert fit["D_const"] == pytest.approx(0.7, rel=1e-6)
        assert fit.model == "diffusion"

    def test_too_few_points(self):
        """Test that a single point is refused."""
        with pytest.raises(FitFailureError):
            fit_diffusion_constant([10.0], [0.3], N=8, L=64)
