"""Occupation configurations on the logical and physical chains."""

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from scramblesim.exceptions.errors import ConstraintViolationError
from scramblesim.utils.validators import validate_bitstring


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def has_adjacent_pair(bits: int) -> bool:
    """True if two neighboring sites are both occupied."""
    return bits & (bits >> 1) != 0


@dataclass(frozen=True)
class BitConfig:
    """
    Occupation configuration packed into an unsigned integer.

    Site 0 is the least significant bit; ``length`` is the number of sites.
    The string form puts site 0 first.
    """

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"length must be non-negative, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(
                f"bits {self.bits:#x} do not fit in {self.length} sites"
            )

    @classmethod
    def from_string(cls, bits: str):
        validate_bitstring(bits)
        packed = 0
        for site, char in enumerate(bits):
            if char == "1":
                packed |= 1 << site
        return cls(packed, len(bits))

    @classmethod
    def from_sites(cls, sites: Iterable[int], length: int):
        packed = 0
        for site in sites:
            if not 0 <= site < length:
                raise ValueError(f"site {site} outside chain of length {length}")
            packed |= 1 << int(site)
        return cls(packed, length)

    @property
    def count(self) -> int:
        """Number of occupied sites."""
        return popcount(self.bits)

    @property
    def sites(self) -> Tuple[int, ...]:
        """Occupied sites in ascending order."""
        return tuple(s for s in range(self.length) if (self.bits >> s) & 1)

    @property
    def occupation(self) -> np.ndarray:
        return np.array([(self.bits >> s) & 1 for s in range(self.length)], dtype=np.int8)

    def is_occupied(self, site: int) -> bool:
        return bool((self.bits >> site) & 1)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> s) & 1 else "0" for s in range(self.length))


@dataclass(frozen=True)
class LogicalConfig(BitConfig):
    """Occupations of the free-fermion (tau / f) chain of L_tau sites."""


@dataclass(frozen=True)
class PhysicalConfig(BitConfig):
    """Occupations of the constrained (sigma / c) chain of L sites."""

    def __post_init__(self):
        super().__post_init__()
        if has_adjacent_pair(self.bits):
            raise ConstraintViolationError(str(self))
