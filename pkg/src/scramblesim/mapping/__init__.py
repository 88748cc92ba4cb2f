"""Logical/physical configuration bijection and constrained bases."""

from scramblesim.mapping.configs import BitConfig, LogicalConfig, PhysicalConfig
from scramblesim.mapping.bijection import (
    check_constraint,
    logical_to_physical,
    physical_to_logical,
    particle_coordinates,
    logical_sites_to_physical,
    physical_sites_to_logical,
)
from scramblesim.mapping.basis import (
    SectorBasis,
    ConstrainedBasis,
    enumerate_physical,
    enumerate_sector,
    pack_sites,
)

__all__ = [
    "BitConfig",
    "LogicalConfig",
    "PhysicalConfig",
    "check_constraint",
    "logical_to_physical",
    "physical_to_logical",
    "particle_coordinates",
    "logical_sites_to_physical",
    "physical_sites_to_logical",
    "SectorBasis",
    "ConstrainedBasis",
    "enumerate_physical",
    "enumerate_sector",
    "pack_sites",
]
