"""Tests for the exact-diagonalization engine."""

import pytest
import numpy as np

from scramblesim.exact.evolution import (
    basis_state,
    correlation_from_state,
    evolve_exact,
    logical_manybody_spectrum,
)
from scramblesim.exact.operators import (
    ManyBodyOperator,
    build_free_hamiltonian,
    build_physical_hamiltonian,
    hopping_operator,
    logical_xx_hamiltonian,
)
from scramblesim.exact.otoc import OTOCEngine, free_fermion_otoc_reference, otoc
from scramblesim.exceptions.errors import (
    InvalidSectorError,
    SectorMismatchError,
    SectorTooLargeError,
)
from scramblesim.mapping.basis import enumerate_sector


class TestOperators:
    """Tests for many-body Hamiltonians."""

    def test_physical_hamiltonian_structure(self):
        """Test dimension, symmetry and unit hopping elements."""
        H = build_physical_hamiltonian(9, 3)

        assert H.dimension == 35
        np.testing.assert_array_equal(H.matrix, H.matrix.T)
        assert set(np.unique(H.matrix)) <= {0.0, 1.0}
        assert np.all(np.diag(H.matrix) == 0)

    def test_hops_respect_constraint(self):
        """Test that every nonzero element connects admissible neighbors."""
        H = build_physical_hamiltonian(7, 3)
        basis = H.basis
        for row, column in zip(*np.nonzero(H.matrix)):
            changed = basis.bits[row] ^ basis.bits[column]
            assert bin(int(changed)).count("1") == 2
            assert "11" not in str(basis[row])
            # The two flipped sites are neighbors.
            sites = [s for s in range(7) if (int(changed) >> s) & 1]
            assert sites[1] - sites[0] == 1

    def test_free_hamiltonian_single_particle(self):
        """Test that one particle on the free chain reproduces h."""
        H = build_free_hamiltonian(6, 1)

        np.testing.assert_allclose(np.sort(H.energies), logical_manybody_spectrum(6, 1), atol=1e-12)

    def test_logical_xx_spectrum(self):
        """Test the logical spin chain against subset sums."""
        H = logical_xx_hamiltonian(7, 3)

        np.testing.assert_allclose(np.sort(H.energies), logical_manybody_spectrum(7, 3), atol=1e-10)

    @pytest.mark.parametrize("L,N", [(5, 2), (9, 3), (12, 4), (13, 5), (11, 6)])
    def test_spectrum_equivalence(self, L, N):
        """Test the constrained spectrum equals the logical free-fermion one."""
        H = build_physical_hamiltonian(L, N)

        np.testing.assert_allclose(
            np.sort(H.energies), logical_manybody_spectrum(L + 1 - N, N), atol=1e-9
        )

    def test_too_large(self):
        """Test the dimension cap."""
        with pytest.raises(SectorTooLargeError) as excinfo:
            build_physical_hamiltonian(30, 8, max_dim=100)

        assert excinfo.value.cap == 100
        assert excinfo.value.exit_code == 3

    def test_invalid_sector(self):
        """Test that inadmissible sectors are rejected."""
        with pytest.raises(InvalidSectorError):
            build_physical_hamiltonian(6, 4)

    def test_non_hermitian_rejected(self):
        """Test that non-Hermitian matrices are refused."""
        basis = enumerate_sector(3, 1)
        matrix = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

        with pytest.raises(ValueError):
            ManyBodyOperator(basis, matrix)

    def test_hopping_operator_free(self):
        """Test the free-chain hopping operator on two sites."""
        H = hopping_operator(enumerate_sector(2, 1))

        np.testing.assert_array_equal(H.matrix, [[0.0, 1.0], [1.0, 0.0]])


class TestEvolution:
    """Tests for exact evolution and correlations."""

    def test_basis_state(self):
        """Test unit vectors of basis configurations."""
        basis = build_physical_hamiltonian(7, 3).basis
        psi = basis_state(basis, "1010100")

        assert psi.sum() == 1.0
        with pytest.raises(SectorMismatchError):
            basis_state(basis, "1100100")

    def test_norm_conserved(self):
        """Test that exact evolution is unitary."""
        H = build_physical_hamiltonian(9, 3)
        psi = evolve_exact(H, basis_state(H.basis, "001010001"), 4.2)

        assert np.linalg.norm(psi) == pytest.approx(1.0)

    def test_rejects_unnormalized(self):
        """Test input validation of evolve_exact."""
        H = build_physical_hamiltonian(5, 2)

        with pytest.raises(ValueError):
            evolve_exact(H, 2 * basis_state(H.basis, "10100"), 1.0)
        with pytest.raises(ValueError):
            evolve_exact(H, np.ones(2), 1.0)

    def test_correlation_of_basis_state(self):
        """Test that a configuration has diagonal correlations."""
        H = build_physical_hamiltonian(7, 3)
        corr = correlation_from_state(H.basis, basis_state(H.basis, "1010001"))

        np.testing.assert_allclose(corr.entries, np.diag([1, 0, 1, 0, 0, 0, 1]), atol=1e-15)

    def test_correlation_of_superposition(self):
        """Test <c_j^dag c_j'> for a two-configuration superposition."""
        basis = enumerate_sector(2, 1)
        psi = np.array([1.0, 1.0j]) / np.sqrt(2)
        corr = correlation_from_state(basis, psi)

        # Index 0 is "01" (site 1), index 1 is "10" (site 0).
        assert corr.entries[0, 1] == pytest.approx(np.conj(psi[1]) * psi[0])
        assert corr.entries[1, 0] == pytest.approx(np.conj(psi[0]) * psi[1])
        assert corr.trace == pytest.approx(1.0)

    def test_fermion_sign(self):
        """Test the sign of a hop across one particle."""
        basis = enumerate_sector(3, 2)
        psi = np.zeros(basis.dimension, dtype=complex)
        psi[basis.index("110")] = 1 / np.sqrt(2)
        psi[basis.index("011")] = 1 / np.sqrt(2)
        corr = correlation_from_state(basis, psi)

        # c_2^dag c_0 |110> crosses the particle on site 1.
        assert corr.entries[2, 0] == pytest.approx(-0.5)


class TestOTOC:
    """Tests for thermal OTOCs."""

    def test_zero_at_time_zero(self):
        """Test G(0) = 0 since sigma^z operators commute."""
        result = OTOCEngine(9, 3, beta=1.0).profile(4, [0.0, 0.5, 1.0])

        np.testing.assert_allclose(result.values[0], 0.0, atol=1e-12)
        assert result.values.shape == (3, 9)
        assert np.all(result.values >= -1e-12)

    def test_light_cone(self):
        """Test that neighbors scramble before distant sites."""
        result = OTOCEngine(12, 3, beta=0.5).profile(5, [0.5])
        G = result.values[0]

        assert G[6] > G[11]
        assert G[4] > G[0]

    def test_bounded(self):
        """Test 0 <= G <= 4 for commutators of Pauli operators."""
        result = OTOCEngine(8, 3, beta=0.0).profile(3, np.linspace(0, 5, 6))

        assert np.all(result.values <= 4.0 + 1e-10)

    def test_density_matrix(self):
        """Test the canonical ensemble is a unit-trace state."""
        engine = OTOCEngine(8, 3, beta=2.0)

        assert np.trace(engine.density_matrix).real == pytest.approx(1.0)
        assert engine.partition_weights[0] == engine.partition_weights.max()

    def test_infinite_temperature_weights(self):
        """Test beta = 0 weights all eigenstates equally."""
        engine = OTOCEngine(7, 2, beta=0.0)

        np.testing.assert_allclose(engine.partition_weights, 1.0 / engine.dimension)

    def test_threads_agree(self):
        """Test that threaded rows match the serial ones."""
        times = [0.0, 0.3, 0.6, 0.9]
        serial = OTOCEngine(8, 3, threads=1).profile(2, times)
        threaded = OTOCEngine(8, 3, threads=3).profile(2, times)

        np.testing.assert_allclose(serial.values, threaded.values, atol=1e-14)

    def test_otoc_function(self):
        """Test the single-pair helper against the profile."""
        times = [0.0, 1.0, 2.0]
        values = otoc(9, 3, 4, 6, times, beta=1.0)
        profile = OTOCEngine(9, 3, beta=1.0).profile(4, times, sites=[6])

        np.testing.assert_allclose(values, profile.values[:, 0], atol=1e-14)

    def test_free_reference(self):
        """Test the unconstrained reference runs on the full sector."""
        values = free_fermion_otoc_reference(8, 2, 3, 4, [0.0, 1.0])

        assert values.shape == (2,)
        assert values[0] == pytest.approx(0.0, abs=1e-12)
        assert values[1] > 0

    def test_result_metadata(self):
        """Test the OTOC result records its ensemble."""
        result = OTOCEngine(7, 2, beta=1.5, constrained=False).profile(1, [0.0])

        assert result.ensemble == "canonical-fixed-N"
        assert result.constrained is False
        assert result.beta == 1.5
        np.testing.assert_array_equal(result.distances, np.abs(np.arange(7) - 1))

    def test_invalid_arguments(self):
        """Test validation of beta, threads, sites and times."""
        with pytest.raises(ValueError):
            OTOCEngine(7, 2, beta=-1.0)
        with pytest.raises(ValueError):
            OTOCEngine(7, 2, threads=0)

        engine = OTOCEngine(7, 2)
        with pytest.raises(ValueError):
            engine.profile(7, [0.0])
        with pytest.raises(ValueError):
            engine.profile(1, [0.0], sites=[9])
        with pytest.raises(ValueError):
            engine.profile(1, [1.0, 0.5])

    def test_sector_cap(self):
        """Test that OTOCs refuse sectors above the cap."""
        with pytest.raises(SectorTooLargeError):
            OTOCEngine(20, 6, max_dim=50)

    def test_reflection_symmetry(self):
        """Test G_{i,j} = G_{L-1-i, L-1-j} on the open chain."""
        engine = OTOCEngine(10, 3, beta=1.0)
        times = [0.0, 0.7, 1.5, 4.0]
        for source in (0, 2, 4):
            direct = engine.profile(source, times).values
            mirrored = engine.profile(9 - source, times).values

            np.testing.assert_allclose(direct, mirrored[:, ::-1], atol=1e-9)

    def test_free_chain_matches_wick(self):
        """Test the free engine against a Wick evaluation of the grand-canonical OTOC."""
        L, beta, i, j = 6, 0.8, 1, 3
        times = [0.0, 0.4, 1.0, 2.5]
        h = np.diag(np.ones(L - 1), 1) + np.diag(np.ones(L - 1), -1)
        energies, V = np.linalg.eigh(h)
        Gm = (V / (np.exp(beta * energies) + 1.0)) @ V.T
        E_jj = np.zeros((L, L))
        E_jj[j, j] = 1.0

        expected = []
        for t in times:
            u = (V * np.exp(-1j * energies * t)) @ V.T
            A = np.outer(u[i].conj(), u[i])
            M = A @ E_jj - E_jj @ A
            value = np.trace(M.conj().T @ Gm) * np.trace(M @ Gm)
            value += np.trace(M.conj().T @ (np.eye(L) - Gm) @ M @ Gm)
            expected.append(16.0 * value.real)

        # Sectors N = 0 and N = L have unit weight and vanishing commutator.
        weighted = np.zeros(len(times))
        partition = 2.0
        for N in range(1, L):
            engine = OTOCEngine(L, N, beta=beta, constrained=False)
            Z_N = np.exp(-beta * engine.hamiltonian.energies).sum()
            weighted += Z_N * engine.profile(i, times, sites=[j]).values[:, 0]
            partition += Z_N

        np.testing.assert_allclose(weighted / partition, expected, atol=1e-9)

    def test_constrained_plateau_exceeds_free(self):
        """Test the interior long-time OTOC is larger with the constraint."""
        times = np.linspace(10.0, 20.0, 11)
        sites = [4, 5, 7, 8]
        constrained = OTOCEngine(12, 3, beta=1.0).profile(6, times, sites=sites)
        free = OTOCEngine(12, 3, beta=1.0, constrained=False).profile(6, times, sites=sites)

        assert constrained.values.mean() > free.values.mean()
