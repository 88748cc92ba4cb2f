"""Tests for the configuration samplers."""

from itertools import combinations

import pytest
import numpy as np

from scramblesim.core.result import SampleBatch
from scramblesim.dynamics.amplitudes import amplitude
from scramblesim.exceptions.errors import NumericalUnderflowError, SectorTooLargeError
from scramblesim.mapping.configs import LogicalConfig
from scramblesim.sampling.chain_rule import (
    ChainRuleSampler,
    conditional_weights,
    permutation_averaged_probability,
    sequence_probability,
)
from scramblesim.sampling.dpp import DPPSampler
from scramblesim.sampling.exact import ExactSampler, exact_distribution, exact_probabilities
from scramblesim.sampling.factory import create_sampler
from scramblesim.sampling.rng import derive_seed, random_product_sites, stream
from scramblesim.sampling.storage import load_batch, save_batch, sidecar_path


class TestRandomStreams:
    """Tests for counter-based streams."""

    def test_stream_reproducible(self):
        """Test that a key always yields the same stream."""
        a = stream(7, 3).random(5)
        b = stream(7, 3).random(5)

        np.testing.assert_array_equal(a, b)

    def test_streams_independent_of_order(self):
        """Test that drawing other streams first does not matter."""
        stream(7, 0).random(100)
        a = stream(7, 1).random(3)
        b = stream(7, 1).random(3)

        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, stream(7, 2).random(3))

    def test_derive_seed(self):
        """Test that child seeds are deterministic and distinct."""
        assert derive_seed(1, 0, 0) == derive_seed(1, 0, 0)
        assert derive_seed(1, 0, 0) != derive_seed(1, 0, 1)
        assert 0 <= derive_seed(5) < 2**64

    def test_random_product_sites(self):
        """Test random product states are sorted N-subsets."""
        sites = random_product_sites(10, 4, seed=3, state_index=2)

        assert len(sites) == 4
        assert list(sites) == sorted(set(sites))
        assert all(0 <= k < 10 for k in sites)
        assert sites == random_product_sites(10, 4, seed=3, state_index=2)


class TestConditionalWeights:
    """Tests for chain-rule conditional weights."""

    @pytest.mark.parametrize("rows,cols", [([], [1]), ([2], [0, 2]), ([4, 0], [2, 1, 0])])
    def test_nullspace_matches_naive(self, random_state, rows, cols):
        """Test the null-space path against explicit determinants."""
        U = random_state.orbitals
        fast = conditional_weights(U, rows, cols, method="nullspace")
        naive = conditional_weights(U, rows, cols, method="naive")

        np.testing.assert_allclose(fast, naive, atol=1e-12)
        assert fast.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "rows,cols",
        [([], [2]), ([5], [0, 3]), ([1, 7], [3, 1, 2]), ([0, 4, 8], [2, 0, 3, 1])],
    )
    def test_marginalization_identity(self, make_state, rows, cols):
        """Test summing the next row out removes one column from the block."""
        U = make_state(9, 4, seed=13).orbitals

        def weight(r, c):
            block = U[np.ix_(np.array(r, dtype=int), np.array(c, dtype=int))]
            return abs(np.linalg.det(block)) ** 2

        lhs = sum(weight(rows + [x], cols) for x in range(9))
        rhs = sum(weight(rows, [c for c in cols if c != v]) for v in cols)
        raw = conditional_weights(U, rows, cols, method="naive", normalize=False)

        assert lhs == pytest.approx(rhs, abs=1e-9)
        assert raw.sum() == pytest.approx(lhs, abs=1e-9)

    def test_chosen_rows_excluded(self, random_state):
        """Test that rows already drawn have zero weight."""
        weights = conditional_weights(random_state.orbitals, [1, 4], [0, 1, 2])

        assert weights[1] == 0.0
        assert weights[4] == 0.0

    def test_raw_naive_weights(self, random_state):
        """Test unnormalized naive weights are |det|^2."""
        U = random_state.orbitals
        weights = conditional_weights(U, [3], [2, 0], method="naive", normalize=False)
        expected = abs(np.linalg.det(U[np.ix_([3, 5], [2, 0])])) ** 2

        assert weights[5] == pytest.approx(expected, rel=1e-10)

    def test_column_count(self, random_state):
        """Test that cols must have one more entry than rows."""
        with pytest.raises(ValueError):
            conditional_weights(random_state.orbitals, [1], [0])

    def test_unknown_method(self, random_state):
        """Test that unknown methods are rejected."""
        with pytest.raises(ValueError):
            conditional_weights(random_state.orbitals, [], [0], method="magic")

    def test_underflow(self, product_state):
        """Test that an all-zero conditional law raises."""
        # Site 6 carries neither orbital 0 nor 1, so every block is singular.
        with pytest.raises(NumericalUnderflowError):
            conditional_weights(product_state.orbitals, [6], [0, 1], method="naive")

    def test_permutation_average_is_born_rule(self, random_state):
        """Test that the average over column orders gives |Psi_m|^2."""
        for sites in combinations(range(6), 3):
            m = LogicalConfig.from_sites(sites, 6)
            averaged = permutation_averaged_probability(random_state, m)

            assert averaged == pytest.approx(abs(amplitude(random_state, m)) ** 2, abs=1e-12)

    def test_sequence_probabilities_sum_to_one(self, small_random_state):
        """Test that ordered sequences form a distribution for fixed columns."""
        from itertools import permutations

        U = small_random_state.orbitals
        total = sum(
            sequence_probability(U, list(rows), [1, 0])
            for rows in permutations(range(5), 2)
        )

        assert total == pytest.approx(1.0)


class TestSamplers:
    """Tests for sampler backends."""

    @pytest.mark.parametrize("backend", ["chain_rule", "dpp", "exact"])
    def test_batch_shape(self, random_state, backend):
        """Test that batches hold sorted N-subsets of logical sites."""
        batch = create_sampler(backend).sample_batch(random_state, 40, seed=1)

        assert batch.M_s == 40
        assert batch.N == 3
        assert batch.L_tau == 6
        assert batch.sampler == backend
        assert np.all(np.diff(batch.sites, axis=1) > 0)

    @pytest.mark.parametrize("backend", ["chain_rule", "dpp", "exact"])
    def test_thread_independence(self, random_state, backend):
        """Test that the batch does not depend on the thread count."""
        sampler = create_sampler(backend)
        serial = sampler.sample_batch(random_state, 60, seed=9, threads=1)
        parallel = sampler.sample_batch(random_state, 60, seed=9, threads=4)

        np.testing.assert_array_equal(serial.sites, parallel.sites)

    def test_seed_changes_batch(self, random_state):
        """Test that different seeds give different batches."""
        sampler = ChainRuleSampler()
        a = sampler.sample_batch(random_state, 50, seed=1)
        b = sampler.sample_batch(random_state, 50, seed=2)

        assert not np.array_equal(a.sites, b.sites)

    def test_product_state_sampling(self, product_state):
        """Test that a product state always yields its configuration."""
        for backend in ("chain_rule", "dpp"):
            batch = create_sampler(backend).sample_batch(product_state, 20, seed=4)

            assert set(batch.strings()) == {"0011001"}

    def test_naive_method_same_support(self, product_state):
        """Test the naive chain-rule path on a product state."""
        batch = ChainRuleSampler(method="naive").sample_batch(product_state, 5, seed=0)

        assert set(batch.strings()) == {"0011001"}

    def test_fixed_order(self, random_state):
        """Test drawing with a fixed column order."""
        sites = ChainRuleSampler().sample_sites(random_state, stream(0), order=[2, 0, 1])

        assert len(sites) == 3

    def test_invalid_batch_arguments(self, random_state):
        """Test that M_s and threads must be positive."""
        sampler = ChainRuleSampler()
        with pytest.raises(ValueError):
            sampler.sample_batch(random_state, 0, seed=1)
        with pytest.raises(ValueError):
            sampler.sample_batch(random_state, 5, seed=1, threads=0)

    def test_unknown_backend(self):
        """Test that the factory rejects unknown backends."""
        with pytest.raises(ValueError):
            create_sampler("metropolis")

    def test_unknown_chain_rule_method(self):
        """Test that the chain-rule sampler rejects unknown methods."""
        with pytest.raises(ValueError):
            ChainRuleSampler(method="magic")

    def test_empty_sector(self):
        """Test sampling with N = 0."""
        from scramblesim.dynamics.slater import initial_slater

        batch = ChainRuleSampler().sample_batch(initial_slater("0000"), 3, seed=0)

        assert batch.sites.shape == (3, 0)


class TestExactDistribution:
    """Tests for the enumerated oracle."""

    def test_probabilities_normalized(self, random_state):
        """Test that the enumerated law sums to one."""
        basis, probabilities = exact_probabilities(random_state)

        assert basis.dimension == 20
        assert probabilities.sum() == pytest.approx(1.0)

    def test_distribution_matches_amplitudes(self, random_state):
        """Test each entry against |Psi_m|^2."""
        for config, p in exact_distribution(random_state).items():
            assert p == pytest.approx(abs(amplitude(random_state, config)) ** 2, abs=1e-12)

    def test_cap(self, random_state):
        """Test that sectors above the cap are refused."""
        with pytest.raises(SectorTooLargeError):
            exact_probabilities(random_state, cap=10)
        with pytest.raises(SectorTooLargeError):
            ExactSampler(cap=10).sample_batch(random_state, 5, seed=0)


class TestStorage:
    """Tests for sample batch files."""

    def test_roundtrip(self, random_state, tmp_path):
        """Test writing and reading a batch."""
        batch = ChainRuleSampler().sample_batch(random_state, 25, seed=derive_seed(3, 0, 0))
        path = save_batch(batch, tmp_path / "samples.txt")
        loaded = load_batch(path)

        np.testing.assert_array_equal(loaded.sites, batch.sites)
        assert loaded.seed == batch.seed
        assert loaded.L_tau == 6
        assert sidecar_path(path).exists()
        assert path.read_text().splitlines() == batch.strings()

    def test_truncated_file(self, tmp_path):
        """Test that a file disagreeing with its sidecar is rejected."""
        batch = SampleBatch(sites=[[0, 2], [1, 3]], L_tau=4, seed=1)
        path = save_batch(batch, tmp_path / "samples.txt")
        path.write_text("1010\n")

        with pytest.raises(ValueError):
            load_batch(path)
