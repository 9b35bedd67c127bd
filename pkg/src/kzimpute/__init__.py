"""kzimpute: adaptive gap filling for univariate time series.

Gap-size- and position-aware imputation rules for gaps of one to five (and
more) consecutive missing points, eight reference imputers to compare
against, a seeded MCAR corruption generator, an eight-metric scoring suite,
and a benchmark harness that ties them together behind one CLI.
"""

from .engine import (
    ImputationOutcome,
    KZConfig,
    KZImputer,
    impute_gap_1,
    impute_gap_2,
    impute_gap_3,
    impute_gap_4,
    impute_gap_5_plus,
    kz_impute,
)
from .errors import (
    AllMissingError,
    ColumnNotFoundError,
    ConfigError,
    EmptyWindowError,
    InfeasiblePlanError,
    KZImputeError,
    NoEvaluatedPointsError,
    ParseError,
    SeriesHasMissingError,
    ZeroReferenceError,
    ZeroVarianceError,
)
from .kernels import active_backend
from .series import (
    Direction,
    GapPosition,
    GapSegment,
    TimeSeries,
    Window,
    cached_mean,
    scan_gaps,
    take_k_nearest,
)

__version__ = "0.1.0"

__all__ = [
    "TimeSeries",
    "GapSegment",
    "GapPosition",
    "Window",
    "Direction",
    "scan_gaps",
    "cached_mean",
    "take_k_nearest",
    "KZConfig",
    "KZImputer",
    "ImputationOutcome",
    "kz_impute",
    "impute_gap_1",
    "impute_gap_2",
    "impute_gap_3",
    "impute_gap_4",
    "impute_gap_5_plus",
    "active_backend",
    "KZImputeError",
    "AllMissingError",
    "EmptyWindowError",
    "SeriesHasMissingError",
    "InfeasiblePlanError",
    "NoEvaluatedPointsError",
    "ZeroVarianceError",
    "ZeroReferenceError",
    "ColumnNotFoundError",
    "ParseError",
    "ConfigError",
]
