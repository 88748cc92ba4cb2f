"""
scramblesim - information scrambling on a constrained fermion chain.

Nearest-neighbor-excluded fermions on L sites map onto free fermions on
L + 1 - N sites. Dynamics run exactly on the free side; physical
observables are recovered by sampling the free Slater determinant:
    Evolution -> Sampling -> Correlation estimate -> Natural orbitals

Example:
    >>> import numpy as np
    >>> from scramblesim import ScramblingSimulator
    >>> simulator = ScramblingSimulator()
    >>> result = simulator.hamming(L=64, N=8, times=np.geomspace(0.1, 100, 30), seed=7)
    >>> print(f"D(t_max) = {result.D[-1]:.3f}")
"""

__version__ = "0.1.0"
__license__ = "MIT"

from scramblesim.core.simulator import ScramblingSimulator
from scramblesim.core.pipeline import ScramblingPipeline
from scramblesim.core.result import (
    CorrelationMatrix,
    FitResult,
    MomentumResult,
    OTOCResult,
    SampleBatch,
    ScramblingDiagnostics,
    TrajectoryResult,
)
from scramblesim.config.settings import SimulationConfig
from scramblesim.config.experiment import ExperimentConfig
from scramblesim.exceptions.errors import (
    ScrambleSimError,
    ConstraintViolationError,
    InvalidSectorError,
    SectorTooLargeError,
    DegenerateAmplitudeError,
    NumericalUnderflowError,
    FitFailureError,
)

__all__ = [
    # Main classes
    "ScramblingSimulator",
    "ScramblingPipeline",
    "SimulationConfig",
    "ExperimentConfig",
    # Result types
    "CorrelationMatrix",
    "FitResult",
    "MomentumResult",
    "OTOCResult",
    "SampleBatch",
    "ScramblingDiagnostics",
    "TrajectoryResult",
    # Exceptions
    "ScrambleSimError",
    "ConstraintViolationError",
    "InvalidSectorError",
    "SectorTooLargeError",
    "DegenerateAmplitudeError",
    "NumericalUnderflowError",
    "FitFailureError",
    # Metadata
    "__version__",
]
