"""Exception types shared across the package."""

from __future__ import annotations


class KZImputeError(Exception):
    """Base class for all package errors."""


class AllMissingError(KZImputeError):
    """Raised when a series contains no present value to anchor on."""


class EmptyWindowError(KZImputeError):
    """Raised when a window holds zero present values."""


class SeriesHasMissingError(KZImputeError):
    """Raised when corruption is asked to blank an already-gappy series."""


class InfeasiblePlanError(KZImputeError):
    """Raised when a corruption plan cannot fit the series with separation."""


class NoEvaluatedPointsError(KZImputeError):
    """Raised when a metric is asked to score an empty truth set."""


class ZeroVarianceError(KZImputeError):
    """Raised when a correlation is undefined because a series is constant."""


class ZeroReferenceError(KZImputeError):
    """Raised when an improvement percentage has a zero reference error."""


class ColumnNotFoundError(KZImputeError):
    """Raised when the requested CSV column does not exist."""


class ParseError(KZImputeError):
    """Raised for a non-numeric, non-missing CSV token.

    Carries the 1-based file line number and the offending token.
    """

    def __init__(self, row: int, token: str):
        super().__init__(f"row {row}: cannot parse {token!r} as a number")
        self.row = row
        self.token = token


class ConfigError(KZImputeError):
    """Raised for an invalid run-config value; names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
