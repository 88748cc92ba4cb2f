"""Custom exception classes for scramblesim."""

from typing import Optional


class ScrambleSimError(Exception):
    """Base exception for scramblesim errors."""

    exit_code = 1

    def __init__(self, message: str = "scramblesim error"):
        self.message = message
        super().__init__(self.message)


class ConstraintViolationError(ScrambleSimError):
    """Raised when a physical configuration has two adjacent occupied sites."""

    exit_code = 2

    def __init__(self, bitstring: str = "", message: str = "Adjacent occupied sites"):
        self.bitstring = bitstring
        super().__init__(f"{message}: {bitstring}" if bitstring else message)


class InvalidSectorError(ScrambleSimError):
    """Raised when (L, N) is outside 0 <= N <= (L + 1) / 2."""

    exit_code = 2

    def __init__(self, L: int, N: int, message: str = "Invalid particle sector"):
        self.L = L
        self.N = N
        super().__init__(f"{message}: L={L}, N={N}")


class SectorMismatchError(ScrambleSimError):
    """Raised when a configuration does not match the state's (L_tau, N)."""

    exit_code = 2


class EmptyBatchError(ScrambleSimError):
    """Raised when an estimator receives no samples."""

    exit_code = 2

    def __init__(self, message: str = "Sample batch is empty"):
        super().__init__(message)


class ConfigurationError(ScrambleSimError):
    """Raised when there is a configuration error."""

    exit_code = 2

    def __init__(self, message: str = "Invalid configuration"):
        super().__init__(message)


class SectorTooLargeError(ScrambleSimError):
    """Raised when a dense computation would exceed its dimension cap."""

    exit_code = 3

    def __init__(self, dimension: int, cap: int, message: str = "Sector too large"):
        self.dimension = dimension
        self.cap = cap
        super().__init__(f"{message}: dimension {dimension} exceeds cap {cap}")


class DegenerateAmplitudeError(ScrambleSimError):
    """Raised when a ratio is requested against a vanishing amplitude."""

    exit_code = 4

    def __init__(self, message: str = "Amplitude is numerically zero"):
        super().__init__(message)


class NumericalUnderflowError(ScrambleSimError):
    """Raised when every candidate weight of a sampling step underflows."""

    exit_code = 4

    def __init__(
        self,
        message: str = "All candidate weights underflowed",
        sample_index: Optional[int] = None,
    ):
        self.sample_index = sample_index
        super().__init__(message)


class FitFailureError(ScrambleSimError):
    """Raised when a curve fit is degenerate or does not converge."""

    exit_code = 4

    def __init__(self, model: str, message: str = "Fit failed"):
        self.model = model
        super().__init__(f"{message} ({model})")
