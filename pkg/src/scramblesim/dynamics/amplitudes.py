"""Configuration amplitudes of Slater states and their ratios."""

from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from scramblesim.config.defaults import AMPLITUDE_FLOOR
from scramblesim.dynamics.slater import SlaterState
from scramblesim.exceptions.errors import DegenerateAmplitudeError, SectorMismatchError
from scramblesim.mapping.configs import LogicalConfig

LOG_AMPLITUDE_FLOOR = np.log(AMPLITUDE_FLOOR)

ConfigInput = Union[LogicalConfig, str]


def _as_config(m: ConfigInput) -> LogicalConfig:
    if isinstance(m, str):
        return LogicalConfig.from_string(m)
    return m


def _rows(s: SlaterState, m: ConfigInput) -> Tuple[int, ...]:
    m = _as_config(m)
    if m.length != s.L_tau or m.count != s.N:
        raise SectorMismatchError(
            f"Configuration {m} (L_tau={m.length}, N={m.count}) does not match "
            f"state (L_tau={s.L_tau}, N={s.N})"
        )
    return m.sites


def log_amplitude(s: SlaterState, m: ConfigInput) -> Tuple[float, float]:
    """
    Amplitude of m as a (log-magnitude, phase) pair.

    The amplitude is the determinant of the rows of the orbital matrix at
    the occupied sites of m, rows ascending and columns in stored order.
    A vanishing amplitude has log-magnitude -inf.

    Raises:
        SectorMismatchError: If m does not have N particles on L_tau sites
    """
    rows = _rows(s, m)
    if s.N == 0:
        return 0.0, 0.0
    sign, logabs = np.linalg.slogdet(s.orbitals[list(rows)])
    return float(logabs), float(np.angle(sign))


def amplitude(s: SlaterState, m: ConfigInput) -> complex:
    """Amplitude Psi_m = det U[m rows]."""
    logabs, phase = log_amplitude(s, m)
    if logabs == -np.inf:
        return 0j
    return complex(np.exp(logabs + 1j * phase))


def _check_move(m: LogicalConfig, from_site: int, to_site: int) -> None:
    if not m.is_occupied(from_site):
        raise ValueError(f"Site {from_site} is empty in {m}")
    if to_site != from_site and m.is_occupied(to_site):
        raise ValueError(f"Site {to_site} is occupied in {m}")


def _moved(m: LogicalConfig, from_site: int, to_site: int) -> LogicalConfig:
    bits = (m.bits & ~(1 << from_site)) | (1 << to_site)
    return LogicalConfig(bits, m.length)


def amplitude_ratio(
    s: SlaterState,
    m: ConfigInput,
    from_site: int,
    to_site: int,
    method: str = "fast",
) -> complex:
    """
    Psi_m' / Psi_m where m' moves the particle at from_site to to_site.

    Args:
        s: Slater state
        m: Reference configuration, occupied at from_site
        from_site: Site the particle leaves
        to_site: Site the particle moves to, empty in m
        method: "fast" (one LU factorization and a row-replacement solve)
            or "direct" (two determinants)

    Returns:
        Complex amplitude ratio

    Raises:
        DegenerateAmplitudeError: If |Psi_m| < 1e-300
        SectorMismatchError: If m does not match the state
    """
    m = _as_config(m)
    rows = list(_rows(s, m))
    _check_move(m, from_site, to_site)

    logabs, phase = log_amplitude(s, m)
    if logabs < LOG_AMPLITUDE_FLOOR:
        raise DegenerateAmplitudeError(f"Amplitude of {m} is numerically zero")

    if from_site == to_site:
        return 1.0 + 0j

    if method == "direct":
        new_logabs, new_phase = log_amplitude(s, _moved(m, from_site, to_site))
        if new_logabs == -np.inf:
            return 0j
        return complex(np.exp(new_logabs - logabs + 1j * (new_phase - phase)))

    if method != "fast":
        raise ValueError(f"Unknown ratio method: {method}. Supported: fast, direct")

    # Replacing row r of A by u gives det ratio (A^{-T} u)_r; moving the new
    # row to its sorted slot passes every particle strictly between the sites.
    factors = lu_factor(s.orbitals[rows])
    x = lu_solve(factors, s.orbitals[to_site], trans=1)
    r = rows.index(from_site)
    lo, hi = sorted((from_site, to_site))
    crossed = sum(1 for k in rows if lo < k < hi)
    return complex((-1) ** crossed * x[r])


class SlaterRatioEvaluator:
    """
    Amplitude ratios Psi_m' / Psi_m for a fixed reference m.

    Factorizes once: G = U A^{-1} with A = U[m rows]. For any m' the ratio
    is det G[m' rows]; when m' differs from m by a few particles only the
    block of changed rows and columns is evaluated.

    Example:
        >>> evaluator = SlaterRatioEvaluator(state, m)
        >>> evaluator.hop_ratio(from_site=3, to_site=5)
    """

    def __init__(self, s: SlaterState, m: ConfigInput):
        self.state = s
        self.reference = _as_config(m)
        self.rows = np.array(_rows(s, self.reference), dtype=np.int64)

        logabs, _ = log_amplitude(s, self.reference)
        if logabs < LOG_AMPLITUDE_FLOOR:
            raise DegenerateAmplitudeError(
                f"Amplitude of {self.reference} is numerically zero"
            )

        if s.N:
            # G^T = A^{-T} U^T
            self.green = np.linalg.solve(s.orbitals[self.rows].T, s.orbitals.T).T
        else:
            self.green = np.zeros((s.L_tau, 0), dtype=complex)

    def ratio(self, new: Union[ConfigInput, Sequence[int]]) -> complex:
        """
        Ratio for an arbitrary configuration with the same N.

        Args:
            new: Configuration or sorted occupied sites of m'
        """
        if isinstance(new, (LogicalConfig, str)):
            new_sites = np.array(_rows(self.state, new), dtype=np.int64)
        else:
            new_sites = np.asarray(new, dtype=np.int64)
            if new_sites.shape != self.rows.shape:
                raise SectorMismatchError(
                    f"Expected {self.rows.size} sites, got {new_sites.size}"
                )

        removed_cols = np.flatnonzero(~np.isin(self.rows, new_sites))
        added_rows = np.flatnonzero(~np.isin(new_sites, self.rows))
        if removed_cols.size == 0:
            return 1.0 + 0j

        block = self.green[np.ix_(new_sites[added_rows], removed_cols)]
        sign = (-1) ** int(removed_cols.sum() + added_rows.sum())
        return complex(sign * np.linalg.det(block))

    def hop_ratio(self, from_site: int, to_site: int) -> complex:
        """Ratio for a single particle moving from from_site to to_site."""
        _check_move(self.reference, from_site, to_site)
        if from_site == to_site:
            return 1.0 + 0j
        return self.ratio(_moved(self.reference, from_site, to_site))
