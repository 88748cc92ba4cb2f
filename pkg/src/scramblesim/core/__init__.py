"""Result types and the simulation pipeline."""

from scramblesim.core.result import (
    SampleBatch,
    DensityEstimate,
    CorrelationMatrix,
    NaturalOrbitalSpectrum,
    ScramblingDiagnostics,
    FitResult,
    TrajectoryResult,
    MomentumResult,
    OTOCResult,
)

# The pipeline imports the dynamics and observables packages, which in
# turn import the result types above, so it is resolved on first access.
_LAZY = {
    "ScramblingPipeline": "scramblesim.core.pipeline",
    "ScramblingSimulator": "scramblesim.core.simulator",
}


def __getattr__(name):
    if name in _LAZY:
        import importlib

        return getattr(importlib.import_module(_LAZY[name]), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "ScramblingPipeline",
    "ScramblingSimulator",
    "SampleBatch",
    "DensityEstimate",
    "CorrelationMatrix",
    "NaturalOrbitalSpectrum",
    "ScramblingDiagnostics",
    "FitResult",
    "TrajectoryResult",
    "MomentumResult",
    "OTOCResult",
]
