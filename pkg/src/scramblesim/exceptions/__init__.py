"""Custom exceptions for scramblesim."""

from scramblesim.exceptions.errors import (
    ScrambleSimError,
    ConstraintViolationError,
    InvalidSectorError,
    SectorMismatchError,
    EmptyBatchError,
    ConfigurationError,
    SectorTooLargeError,
    DegenerateAmplitudeError,
    NumericalUnderflowError,
    FitFailureError,
)

__all__ = [
    "ScrambleSimError",
    "ConstraintViolationError",
    "InvalidSectorError",
    "SectorMismatchError",
    "EmptyBatchError",
    "ConfigurationError",
    "SectorTooLargeError",
    "DegenerateAmplitudeError",
    "NumericalUnderflowError",
    "FitFailureError",
]
