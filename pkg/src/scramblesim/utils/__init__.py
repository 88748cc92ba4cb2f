"""Utility functions."""

from scramblesim.utils.validators import (
    validate_bitstring,
    validate_sector,
    validate_time_grid,
    validate_orbitals,
)
from scramblesim.utils.io import write_csv, write_json, write_manifest
from scramblesim.utils.logging import configure_logging

__all__ = [
    "validate_bitstring",
    "validate_sector",
    "validate_time_grid",
    "validate_orbitals",
    "write_csv",
    "write_json",
    "write_manifest",
    "configure_logging",
]
