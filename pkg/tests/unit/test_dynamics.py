"""Tests for the logical free-fermion dynamics."""

import json

import pytest
import numpy as np

from scramblesim.dynamics.amplitudes import (
    SlaterRatioEvaluator,
    amplitude,
    amplitude_ratio,
    log_amplitude,
)
from scramblesim.dynamics.hamiltonian import build_hamiltonian
from scramblesim.dynamics.slater import (
    SlaterState,
    evolve,
    ground_state_energy,
    ground_state_slater,
    initial_slater,
    load_state,
    logical_correlation,
    save_state,
)
from scramblesim.exceptions.errors import DegenerateAmplitudeError, SectorMismatchError
from scramblesim.mapping.configs import LogicalConfig


class TestHoppingHamiltonian:
    """Tests for the single-particle Hamiltonian."""

    @pytest.mark.parametrize("L_tau", [1, 2, 7, 40])
    def test_analytic_spectrum(self, L_tau):
        """Test energies 2 cos(q pi / (L_tau + 1))."""
        h = build_hamiltonian(L_tau)

        np.testing.assert_allclose(h.energies, h.analytic_energies(), atol=1e-12)

    def test_modes_diagonalize(self):
        """Test that the stored modes diagonalize h."""
        h = build_hamiltonian(9)
        diagonal = h.modes.T @ h.matrix @ h.modes

        np.testing.assert_allclose(diagonal, np.diag(h.energies), atol=1e-12)

    def test_propagator_unitary(self):
        """Test that exp(-i h t) is unitary."""
        U = build_hamiltonian(8).propagator(3.7)

        np.testing.assert_allclose(U.conj().T @ U, np.eye(8), atol=1e-12)

    def test_apply_matches_propagator(self):
        """Test apply_propagator against the dense propagator."""
        h = build_hamiltonian(6)
        vectors = np.eye(6)[:, :2].astype(complex)

        np.testing.assert_allclose(
            h.apply_propagator(vectors, 1.3), h.propagator(1.3) @ vectors, atol=1e-12
        )

    def test_invalid_size(self):
        """Test that L_tau < 1 is rejected."""
        with pytest.raises(ValueError):
            build_hamiltonian(0)


class TestSlaterState:
    """Tests for SlaterState construction and evolution."""

    def test_initial_state(self, product_state):
        """Test the product state has unit-vector orbitals."""
        assert product_state.L_tau == 7
        assert product_state.N == 3
        assert product_state.L == 9
        assert product_state.orthonormality_error() == 0.0
        np.testing.assert_array_equal(
            np.flatnonzero(np.abs(product_state.orbitals).sum(axis=1)), [2, 3, 6]
        )

    def test_orthonormal_after_evolution(self, product_state):
        """Test that long evolution keeps the orbitals orthonormal."""
        state = evolve(product_state, 250.0)

        assert state.time == 250.0
        assert state.orthonormality_error() < 1e-12

    def test_evolution_composes(self, product_state):
        """Test that evolving twice equals evolving once."""
        once = evolve(product_state, 2.0)
        twice = evolve(evolve(product_state, 0.5), 1.5)

        np.testing.assert_allclose(once.orbitals, twice.orbitals, atol=1e-12)
        assert twice.time == pytest.approx(2.0)

    def test_orbitals_read_only(self, product_state):
        """Test that orbitals cannot be mutated in place."""
        with pytest.raises(ValueError):
            product_state.orbitals[0, 0] = 2.0

    def test_ground_state(self):
        """Test the ground state holds the lowest modes."""
        state = ground_state_slater(10, 4)
        h = build_hamiltonian(10)
        energy = np.real(np.trace(state.orbitals.conj().T @ h.matrix @ state.orbitals))

        assert energy == pytest.approx(ground_state_energy(10, 4))
        assert ground_state_energy(10, 4) == pytest.approx(np.sort(h.analytic_energies())[:4].sum())

    def test_ground_state_invalid(self):
        """Test that N > L_tau is rejected."""
        with pytest.raises(ValueError):
            ground_state_slater(3, 4)

    def test_logical_correlation_projector(self, evolved_state):
        """Test that the logical correlation matrix is a rank-N projector."""
        corr = logical_correlation(evolved_state)

        assert corr.trace == pytest.approx(3.0)
        np.testing.assert_allclose(corr.entries @ corr.entries, corr.entries, atol=1e-12)

    def test_save_load_roundtrip(self, evolved_state, tmp_path):
        """Test checkpointing a state as JSON."""
        path = save_state(evolved_state, tmp_path / "state.json")
        loaded = load_state(path)

        np.testing.assert_allclose(loaded.orbitals, evolved_state.orbitals, atol=1e-15)
        assert loaded.time == evolved_state.time

    def test_load_rejects_non_orthonormal(self, tmp_path):
        """Test that corrupted orbitals are rejected on load."""
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps({"L_tau": 2, "N": 1, "time": 0.0, "orbitals": [[[1.0, 0.0]], [[1.0, 0.0]]]})
        )

        with pytest.raises(ValueError):
            load_state(path)


class TestAmplitudes:
    """Tests for amplitudes and amplitude ratios."""

    def test_product_state_amplitudes(self, product_state):
        """Test amplitudes of the initial configuration and another one."""
        assert amplitude(product_state, "0011001") == pytest.approx(1.0)
        assert amplitude(product_state, "1011000") == 0j

    def test_log_amplitude_zero(self, product_state):
        """Test that a vanishing amplitude has log-magnitude -inf."""
        logabs, _ = log_amplitude(product_state, "1110000")

        assert logabs == -np.inf

    def test_sector_mismatch(self, product_state):
        """Test that configurations of another sector are rejected."""
        with pytest.raises(SectorMismatchError):
            amplitude(product_state, "0011")
        with pytest.raises(SectorMismatchError):
            amplitude(product_state, "0011000")

    def test_amplitudes_normalized(self, random_state):
        """Test sum over the sector of |Psi_m|^2 = 1."""
        from itertools import combinations

        total = sum(
            abs(amplitude(random_state, LogicalConfig.from_sites(s, 6))) ** 2
            for s in combinations(range(6), 3)
        )

        assert total == pytest.approx(1.0)

    @pytest.mark.parametrize("from_site,to_site", [(1, 4), (0, 5), (3, 2), (1, 1)])
    def test_fast_ratio_matches_direct(self, random_state, from_site, to_site):
        """Test the row-replacement ratio against two determinants."""
        m = "110100"
        fast = amplitude_ratio(random_state, m, from_site, to_site, method="fast")
        direct = amplitude_ratio(random_state, m, from_site, to_site, method="direct")

        assert fast == pytest.approx(direct, rel=1e-10, abs=1e-12)

    def test_ratio_definition(self, random_state):
        """Test that the ratio equals Psi_m' / Psi_m."""
        ratio = amplitude_ratio(random_state, "110100", 0, 5)
        expected = amplitude(random_state, "010101") / amplitude(random_state, "110100")

        assert ratio == pytest.approx(expected, rel=1e-10)

    def test_ratio_invalid_move(self, random_state):
        """Test moves from empty or onto occupied sites."""
        with pytest.raises(ValueError):
            amplitude_ratio(random_state, "110100", 2, 5)
        with pytest.raises(ValueError):
            amplitude_ratio(random_state, "110100", 0, 1)

    def test_ratio_degenerate_reference(self, product_state):
        """Test that a zero reference amplitude raises."""
        with pytest.raises(DegenerateAmplitudeError):
            amplitude_ratio(product_state, "1011000", 0, 1)

    def test_evaluator_matches_ratio(self, random_state):
        """Test SlaterRatioEvaluator for hops and multi-particle moves."""
        evaluator = SlaterRatioEvaluator(random_state, "110100")
        base = amplitude(random_state, "110100")

        assert evaluator.hop_ratio(3, 4) == pytest.approx(
            amplitude_ratio(random_state, "110100", 3, 4), rel=1e-10
        )
        assert evaluator.ratio("001011") == pytest.approx(
            amplitude(random_state, "001011") / base, rel=1e-10
        )
        assert evaluator.ratio([0, 1, 3]) == pytest.approx(1.0)

    def test_evaluator_site_count(self, random_state):
        """Test that site arrays of the wrong length are rejected."""
        evaluator = SlaterRatioEvaluator(random_state, "110100")

        with pytest.raises(SectorMismatchError):
            evaluator.ratio([0, 1])

    def test_state_from_orbitals(self):
        """Test SlaterState validation of orbital shape."""
        with pytest.raises(ValueError):
            SlaterState(orbitals=np.ones(3))
