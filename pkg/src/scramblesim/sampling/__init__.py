"""Samplers of Slater-determinant configuration probabilities."""

from scramblesim.sampling.base import BaseSampler
from scramblesim.sampling.chain_rule import (
    ChainRuleSampler,
    conditional_weights,
    sequence_probability,
    permutation_averaged_probability,
)
from scramblesim.sampling.dpp import DPPSampler
from scramblesim.sampling.exact import (
    ExactSampler,
    exact_distribution,
    exact_probabilities,
    sector_amplitudes,
)
from scramblesim.sampling.factory import create_sampler
from scramblesim.sampling.rng import stream, sample_stream, derive_seed
from scramblesim.sampling.storage import save_batch, load_batch

__all__ = [
    "BaseSampler",
    "ChainRuleSampler",
    "DPPSampler",
    "ExactSampler",
    "create_sampler",
    "conditional_weights",
    "sequence_probability",
    "permutation_averaged_probability",
    "exact_distribution",
    "exact_probabilities",
    "sector_amplitudes",
    "stream",
    "sample_stream",
    "derive_seed",
    "save_batch",
    "load_batch",
]
