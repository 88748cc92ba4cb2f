"""Pytest configuration and fixtures."""

import pytest
import numpy as np

from scramblesim.dynamics.slater import SlaterState, evolve, initial_slater


def random_slater(L_tau: int, N: int, seed: int = 0) -> SlaterState:
    """Slater state with Haar-like random orthonormal orbitals."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(L_tau, N)) + 1j * rng.normal(size=(L_tau, N))
    q, _ = np.linalg.qr(z)
    return SlaterState(orbitals=q)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep SCRAMBLESIM_* variables from leaking into SimulationConfig."""
    import os

    for name in list(os.environ):
        if name.startswith("SCRAMBLESIM_"):
            monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def restore_structlog_config():
    """Keep per-test structlog configuration (bound to captured streams) from leaking."""
    import structlog

    saved = structlog.get_config()
    yield
    structlog.configure(**saved)


@pytest.fixture
def logical_bits():
    """Logical configuration with L_tau=7, N=3 (physical L=9)."""
    return "0011001"


@pytest.fixture
def product_state(logical_bits):
    """Product Slater state at t=0."""
    return initial_slater(logical_bits)


@pytest.fixture
def evolved_state(product_state):
    """Product state evolved for a short time."""
    return evolve(product_state, 0.9)


@pytest.fixture
def make_state():
    """Factory for random Slater states: make_state(L_tau, N, seed)."""
    return random_slater


@pytest.fixture
def random_state():
    """Random Slater state on L_tau=6 logical sites with N=3."""
    return random_slater(6, 3, seed=11)


@pytest.fixture
def small_random_state():
    """Random Slater state on L_tau=5 logical sites with N=2."""
    return random_slater(5, 2, seed=3)
