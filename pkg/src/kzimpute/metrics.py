"""Scoring: pointwise errors, distributional distances, and timing.

Pointwise metrics compare imputed values against the true values at the
blanked positions only, and the distributional metrics (Jensen-Shannon,
Wasserstein) compare those same two samples, which makes a constant fill's
point mass visible. NRMSE divides by the truth range; R^2 baselines on the
truth mean. Undefined cases (constant truth, all-zero truth for MAPE) are
reported as None rather than a number.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NoEvaluatedPointsError, ZeroVarianceError
from .series import TimeSeries

DEFAULT_JS_BINS = 50
_JS_SMOOTHING = 1e-10


@dataclass(frozen=True)
class PointwiseErrors:
    mae: float
    rmse: float
    mape: float | None
    nrmse: float | None
    r2: float | None
    evaluated_points: int
    mape_skipped_zeros: int


@dataclass(frozen=True)
class MetricReport:
    """One method's scores on one corrupted series."""

    mae: float
    rmse: float
    mape: float | None
    nrmse: float | None
    r2: float | None
    js_divergence: float
    wasserstein: float
    correlation_diff: float | None
    time_seconds: float
    evaluated_points: int
    mape_skipped_zeros: int

    def __post_init__(self):
        if self.mae > self.rmse + 4 * math.ulp(max(self.rmse, 1.0)):
            raise ValueError("mae exceeds rmse; metric computation is broken")
        if not -1e-12 <= self.js_divergence <= 1.0 + 1e-12:
            raise ValueError("js_divergence out of [0, 1]")
        if self.wasserstein < 0:
            raise ValueError("wasserstein must be non-negative")
        if self.r2 is not None and self.r2 > 1.0 + 1e-12:
            raise ValueError("r2 cannot exceed 1")


def pointwise_errors(
    truth: Sequence[tuple[int, float]], imputed: TimeSeries
) -> PointwiseErrors:
    """MAE/RMSE/MAPE/NRMSE/R^2 over the blanked positions.

    MAPE skips zero-valued truths and counts them; NRMSE and R^2 come back
    None when the truth sample is constant (zero range / zero variance).
    """
    if len(truth) == 0:
        raise NoEvaluatedPointsError("no truth values to evaluate")
    idx = np.array([i for i, _ in truth], dtype=np.intp)
    y = np.array([v for _, v in truth], dtype=np.float64)
    got = imputed.values[idx]
    if np.isnan(got).any():
        raise ValueError("truth index is still missing in the imputed series")

    err = got - y
    mae = float(np.mean(np.abs(err)))
    rmse = float(np.sqrt(np.mean(err * err)))

    nonzero = y != 0.0
    skipped = int(np.size(y) - np.count_nonzero(nonzero))
    mape = (
        float(100.0 * np.mean(np.abs(err[nonzero] / y[nonzero])))
        if nonzero.any()
        else None
    )

    y_range = float(np.max(y) - np.min(y))
    nrmse = rmse / y_range if y_range > 0 else None

    sst = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - float(np.sum(err * err)) / sst if sst > 0 else None

    return PointwiseErrors(
        mae=mae,
        rmse=rmse,
        mape=mape,
        nrmse=nrmse,
        r2=r2,
        evaluated_points=int(y.size),
        mape_skipped_zeros=skipped,
    )


def js_divergence(a, b, bins: int = DEFAULT_JS_BINS) -> float:
    """Jensen-Shannon divergence between two samples, in base-2 logs.

    Both samples are histogrammed over their shared range with equal-width
    bins and epsilon-smoothed, so the result is bounded by exactly 1 and is
    symmetric in its arguments bit for bit.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise NoEvaluatedPointsError("js_divergence needs non-empty samples")
    lo = min(float(a.min()), float(b.min()))
    hi = max(float(a.max()), float(b.max()))
    if lo == hi:
        return 0.0
    p = np.histogram(a, bins=bins, range=(lo, hi))[0].astype(np.float64) + _JS_SMOOTHING
    q = np.histogram(b, bins=bins, range=(lo, hi))[0].astype(np.float64) + _JS_SMOOTHING
    p /= p.sum()
    q /= q.sum()
    m = 0.5 * (p + q)
    js = 0.5 * float(np.sum(p * np.log2(p / m))) + 0.5 * float(np.sum(q * np.log2(q / m)))
    return max(js, 0.0)


def wasserstein_1d(a, b) -> float:
    """First Wasserstein distance between two empirical distributions.

    Equal-sized samples reduce to the mean absolute difference of the sorted
    values; otherwise the area between the empirical CDFs is integrated.
    """
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise NoEvaluatedPointsError("wasserstein_1d needs non-empty samples")
    if a.size == b.size:
        return float(np.mean(np.abs(a - b)))
    xs = np.sort(np.concatenate([a, b]))
    gaps = np.diff(xs)
    cdf_a = np.searchsorted(a, xs[:-1], side="right") / a.size
    cdf_b = np.searchsorted(b, xs[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * gaps))


def _lag1_autocorr(values: np.ndarray) -> float:
    x = values[:-1]
    y = values[1:]
    sx = float(np.std(x))
    sy = float(np.std(y))
    if sx == 0.0 or sy == 0.0:
        raise ZeroVarianceError("lag-1 autocorrelation undefined for a constant series")
    return float(np.corrcoef(x, y)[0, 1])


def correlation_diff(original: TimeSeries, imputed: TimeSeries) -> float:
    """Absolute change in lag-1 autocorrelation caused by imputation."""
    if original.n != imputed.n:
        raise ValueError("series lengths differ")
    if original.n < 3:
        raise ValueError("correlation_diff needs length >= 3")
    if not original.is_complete() or not imputed.is_complete():
        raise ValueError("correlation_diff requires complete series")
    return abs(_lag1_autocorr(original.values) - _lag1_autocorr(imputed.values))


def timed(call: Callable[[], object], repeats: int = 3) -> tuple[object, float]:
    """Run the call ``repeats`` times; report the median wall-clock seconds.

    Only the call itself is timed. The first run's result is returned.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    result = None
    times = []
    for i in range(repeats):
        t0 = time.perf_counter()
        out = call()
        times.append(time.perf_counter() - t0)
        if i == 0:
            result = out
    return result, float(statistics.median(times))


def score(
    truth: Sequence[tuple[int, float]],
    imputed: TimeSeries,
    original: TimeSeries | None = None,
    time_seconds: float = 0.0,
    js_bins: int = DEFAULT_JS_BINS,
) -> MetricReport:
    """Assemble the full metric row for one imputation result.

    correlation_diff needs the complete original series; it is None when the
    original is not supplied or the imputed series still has holes.
    """
    pw = pointwise_errors(truth, imputed)
    y = np.array([v for _, v in truth], dtype=np.float64)
    got = imputed.values[np.array([i for i, _ in truth], dtype=np.intp)]
    corr = None
    if original is not None and imputed.is_complete():
        corr = correlation_diff(original, imputed)
    return MetricReport(
        mae=pw.mae,
        rmse=pw.rmse,
        mape=pw.mape,
        nrmse=pw.nrmse,
        r2=pw.r2,
        js_divergence=js_divergence(y, got, bins=js_bins),
        wasserstein=wasserstein_1d(y, got),
        correlation_diff=corr,
        time_seconds=time_seconds,
        evaluated_points=pw.evaluated_points,
        mape_skipped_zeros=pw.mape_skipped_zeros,
    )


__all__ = [
    "DEFAULT_JS_BINS",
    "PointwiseErrors",
    "MetricReport",
    "pointwise_errors",
    "js_divergence",
    "wasserstein_1d",
    "correlation_diff",
    "timed",
    "score",
]
