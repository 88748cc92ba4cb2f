"""Factory for creating configuration samplers."""

from scramblesim.config.defaults import DEFAULT_SAMPLER
from scramblesim.sampling.base import BaseSampler


def create_sampler(
    backend: str = DEFAULT_SAMPLER,
    show_progress: bool = False,
    **kwargs,
) -> BaseSampler:
    """
    Create a sampler instance.

    Args:
        backend: Sampling backend name
        show_progress: Show a progress bar for batches
        **kwargs: Backend-specific parameters (e.g. ``method`` for chain_rule)

    Returns:
        Configured sampler instance

    Raises:
        ValueError: If backend is not supported
    """
    backend = backend.lower()

    if backend == "chain_rule":
        from scramblesim.sampling.chain_rule import ChainRuleSampler

        return ChainRuleSampler(show_progress=show_progress, **kwargs)

    elif backend == "dpp":
        from scramblesim.sampling.dpp import DPPSampler

        return DPPSampler(show_progress=show_progress)

    elif backend == "exact":
        from scramblesim.sampling.exact import ExactSampler

        cap = kwargs.get("cap")
        if cap is None:
            return ExactSampler(show_progress=show_progress)
        return ExactSampler(cap=cap, show_progress=show_progress)

    else:
        raise ValueError(
            f"Unknown sampler backend: {backend}. Supported: chain_rule, dpp, exact"
        )
