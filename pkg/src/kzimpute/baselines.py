"""The eight reference imputers, sharing the engine's outcome contract.

Every baseline returns a fully filled series whenever at least one value is
present; none of them respects a gap-size ceiling. On a single univariate
column, KNN and the iterative imputer have no auxiliary features to work
with and degenerate to a global-mean fill — they are implemented as exactly
that, so their metric rows match the mean imputer's row bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from .engine import ImputationOutcome, KZConfig, kz_impute
from .errors import AllMissingError
from .series import TimeSeries


class Method(enum.Enum):
    KZ = "kz"
    MEAN = "mean"
    MEDIAN = "median"
    FORWARD_FILL = "ffill"
    BACKWARD_FILL = "bfill"
    LINEAR_INTERPOLATE = "linear"
    SPLINE_INTERPOLATE = "spline"
    KNN = "knn"
    ITERATIVE = "iterative"


_ALLOWED_PARAMS: dict[Method, dict[str, tuple[type, int]]] = {
    # param name -> (type, minimum)
    Method.KZ: {"max_gap_size": (int, 1)},
    Method.KNN: {"k": (int, 1)},
    Method.SPLINE_INTERPOLATE: {"order": (int, 1)},
    Method.ITERATIVE: {"max_iter": (int, 1)},
}

_DEFAULTS: dict[Method, dict[str, int]] = {
    Method.KZ: {"max_gap_size": 5},
    Method.KNN: {"k": 5},
    Method.SPLINE_INTERPOLATE: {"order": 3},
    Method.ITERATIVE: {"max_iter": 10},
}

_LABELS = {
    Method.KZ: "KZImputer",
    Method.MEAN: "Mean",
    Method.MEDIAN: "Median",
    Method.FORWARD_FILL: "Forward Fill",
    Method.BACKWARD_FILL: "Backward Fill",
    Method.LINEAR_INTERPOLATE: "Linear Interpolate",
    Method.SPLINE_INTERPOLATE: "Spline Interpolate",
    Method.KNN: "KNN",
    Method.ITERATIVE: "IterativeImputer",
}


@dataclass(frozen=True)
class ImputerSpec:
    """One imputation method plus its validated parameters."""

    method: Method
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        allowed = _ALLOWED_PARAMS.get(self.method, {})
        for key, value in self.params.items():
            if key not in allowed:
                raise ValueError(f"unknown parameter {key!r} for method {self.method.value!r}")
            typ, minimum = allowed[key]
            if not isinstance(value, typ) or isinstance(value, bool) or value < minimum:
                raise ValueError(f"parameter {key!r} must be an integer >= {minimum}")
        if self.method is Method.SPLINE_INTERPOLATE and self.params.get("order", 3) > 5:
            raise ValueError("spline order above 5 is not supported")

    def param(self, key: str):
        return self.params.get(key, _DEFAULTS[self.method][key])

    @property
    def label(self) -> str:
        if self.method is Method.KNN:
            return f"KNN (k={self.param('k')})"
        return _LABELS[self.method]


def _present(series: TimeSeries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    values = series.values
    mask = np.isnan(values)
    if mask.all():
        raise AllMissingError("series has no present values")
    return values, mask, np.flatnonzero(~mask)


def mean_fill(series: TimeSeries) -> TimeSeries:
    """Every gap takes the global mean of the present values."""
    values, mask, present = _present(series)
    out = values.copy()
    out[mask] = float(np.mean(values[present]))
    return TimeSeries(out)


def median_fill(series: TimeSeries) -> TimeSeries:
    """Every gap takes the global median (midpoint convention for even counts)."""
    values, mask, present = _present(series)
    out = values.copy()
    out[mask] = float(np.median(values[present]))
    return TimeSeries(out)


def _locf(values: np.ndarray) -> np.ndarray:
    """Carry the last present value forward; leading gaps stay missing."""
    n = values.size
    mask = np.isnan(values)
    last = np.where(~mask, np.arange(n), -1)
    np.maximum.accumulate(last, out=last)
    out = values.copy()
    take = mask & (last >= 0)
    out[take] = values[last[take]]
    return out


def ffill(series: TimeSeries) -> TimeSeries:
    """Last observation carried forward; a leading gap falls back to the
    first following value so the output is complete."""
    values, _, _ = _present(series)
    out = _locf(values)
    still = np.isnan(out)
    if still.any():
        out[still] = _locf(values[::-1])[::-1][still]
    return TimeSeries(out)


def bfill(series: TimeSeries) -> TimeSeries:
    """Next observation carried backward; a trailing gap falls back to the
    last preceding value."""
    values, _, _ = _present(series)
    out = _locf(values[::-1])[::-1]
    still = np.isnan(out)
    if still.any():
        out[still] = _locf(values)[still]
    return TimeSeries(out)


def linear_interp(series: TimeSeries) -> TimeSeries:
    """Straight line between bracketing present points; boundary gaps extend
    the nearest present value flat."""
    values, mask, present = _present(series)
    out = values.copy()
    out[mask] = np.interp(np.flatnonzero(mask), present, values[present])
    return TimeSeries(out)


def spline_interp(series: TimeSeries, order: int = 3) -> TimeSeries:
    """Spline through all present points, evaluated at the missing indices.

    Order 3 uses natural boundary conditions (zero second derivative at the
    ends) and genuinely extrapolates into boundary gaps. With fewer than
    order+1 present values the fill falls back to linear interpolation.
    """
    values, mask, present = _present(series)
    if present.size < order + 1:
        return linear_interp(series)
    xs = present.astype(np.float64)
    ys = values[present]
    if order == 3:
        spline = CubicSpline(xs, ys, bc_type="natural", extrapolate=True)
    else:
        spline = make_interp_spline(xs, ys, k=order)
    out = values.copy()
    missing_idx = np.flatnonzero(mask)
    out[missing_idx] = spline(missing_idx.astype(np.float64))
    return TimeSeries(out)


def knn_fill(series: TimeSeries, k: int = 5) -> TimeSeries:
    """k-nearest-neighbour fill, which on a lone univariate column has no
    feature space to search and reduces to the global mean."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return mean_fill(series)


def iterative_fill(series: TimeSeries, max_iter: int = 10) -> TimeSeries:
    """Chained-model imputation, which with no other columns to regress on
    never moves off its mean initialisation."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    return mean_fill(series)


def impute(spec: ImputerSpec, series: TimeSeries) -> ImputationOutcome:
    """Run one method and wrap the result in the shared outcome type."""
    if spec.method is Method.KZ:
        return kz_impute(series, KZConfig(max_gap_size=spec.param("max_gap_size")))

    values = series.values
    mask = np.isnan(values)
    notes: list[str] = []

    if spec.method is Method.MEAN:
        result = mean_fill(series)
    elif spec.method is Method.MEDIAN:
        result = median_fill(series)
    elif spec.method is Method.FORWARD_FILL:
        result = ffill(series)
        if mask.any() and mask[0]:
            notes.append("leading gap filled backward (no prior observation)")
    elif spec.method is Method.BACKWARD_FILL:
        result = bfill(series)
        if mask.any() and mask[-1]:
            notes.append("trailing gap filled forward (no later observation)")
    elif spec.method is Method.LINEAR_INTERPOLATE:
        result = linear_interp(series)
    elif spec.method is Method.SPLINE_INTERPOLATE:
        order = spec.param("order")
        if int((~mask).sum()) < order + 1:
            notes.append("spline had too few points; fell back to linear interpolation")
        result = spline_interp(series, order=order)
    elif spec.method is Method.KNN:
        result = knn_fill(series, k=spec.param("k"))
    elif spec.method is Method.ITERATIVE:
        result = iterative_fill(series, max_iter=spec.param("max_iter"))
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unhandled method {spec.method!r}")

    filled = tuple((int(i), float(result.values[i])) for i in np.flatnonzero(mask))
    return ImputationOutcome(series=result, filled=filled, skipped=(), notes=tuple(notes))


__all__ = [
    "Method",
    "ImputerSpec",
    "impute",
    "mean_fill",
    "median_fill",
    "ffill",
    "bfill",
    "linear_interp",
    "spline_interp",
    "knn_fill",
    "iterative_fill",
]
