"""Reference imputers: fills, fallbacks, and the univariate degeneracy."""

from __future__ import annotations

import numpy as np
import pytest

from kzimpute import AllMissingError, TimeSeries
from kzimpute.baselines import (
    ImputerSpec,
    Method,
    bfill,
    ffill,
    impute,
    iterative_fill,
    knn_fill,
    linear_interp,
    mean_fill,
    median_fill,
    spline_interp,
)

from synth import make_gappy

nan = float("nan")

ALL_METHODS = [
    ImputerSpec(Method.KZ),
    ImputerSpec(Method.MEAN),
    ImputerSpec(Method.MEDIAN),
    ImputerSpec(Method.FORWARD_FILL),
    ImputerSpec(Method.BACKWARD_FILL),
    ImputerSpec(Method.LINEAR_INTERPOLATE),
    ImputerSpec(Method.SPLINE_INTERPOLATE),
    ImputerSpec(Method.KNN),
    ImputerSpec(Method.ITERATIVE),
]


# ---------------------------------------------------------------------------
# Global statistics fills
# ---------------------------------------------------------------------------


def test_mean_fill():
    out = mean_fill(TimeSeries([1, nan, 3]))
    assert out.values.tolist() == [1, 2, 3]


def test_median_fill_odd_count():
    out = median_fill(TimeSeries([1, nan, 2, 100]))
    assert out.values[1] == 2.0


def test_median_fill_even_count_midpoint():
    out = median_fill(TimeSeries([1, nan, 3, 100, 200]))
    assert out.values[1] == (3 + 100) / 2


def test_constant_series_fills():
    s = TimeSeries([4, nan, 4, nan, 4])
    for fn in (mean_fill, median_fill, knn_fill, iterative_fill):
        assert fn(s).values.tolist() == [4, 4, 4, 4, 4]


# ---------------------------------------------------------------------------
# Directional fills
# ---------------------------------------------------------------------------


def test_ffill_locf():
    assert ffill(TimeSeries([5, nan, nan, 9])).values.tolist() == [5, 5, 5, 9]
    assert ffill(TimeSeries([1, nan, 3])).values.tolist() == [1, 1, 3]


def test_ffill_leading_fallback():
    assert ffill(TimeSeries([nan, 7, 8])).values.tolist() == [7, 7, 8]


def test_bfill_nocb_and_trailing_fallback():
    assert bfill(TimeSeries([5, nan, nan, 9])).values.tolist() == [5, 9, 9, 9]
    assert bfill(TimeSeries([7, nan])).values.tolist() == [7, 7]


def test_directional_fills_never_invent_values():
    rng = np.random.default_rng(21)
    for _ in range(200):
        gappy, _ = make_gappy(rng)
        present = set(gappy[~np.isnan(gappy)].tolist())
        for fn in (ffill, bfill):
            out = fn(TimeSeries(gappy)).values
            assert set(out.tolist()) <= present


# ---------------------------------------------------------------------------
# Interpolators
# ---------------------------------------------------------------------------


def test_linear_interior():
    assert linear_interp(TimeSeries([0, nan, 10])).values[1] == 5.0
    assert linear_interp(TimeSeries([0, nan, nan, nan, 8])).values.tolist() == [0, 2, 4, 6, 8]


def test_linear_flat_boundaries():
    assert linear_interp(TimeSeries([nan, 4, 5])).values.tolist() == [4, 4, 5]
    assert linear_interp(TimeSeries([4, 5, nan])).values.tolist() == [4, 5, 5]


def test_linear_exact_on_affine():
    rng = np.random.default_rng(22)
    for _ in range(100):
        n = int(rng.integers(10, 60))
        a, b = rng.uniform(-3, 3), rng.uniform(-50, 50)
        line = a * np.arange(n) + b
        gappy, _ = make_gappy(rng, n_range=(n, n))
        vals = line.copy()
        vals[np.isnan(gappy)] = np.nan
        if np.isnan(vals).all() or np.isnan(vals[0]) or np.isnan(vals[-1]):
            continue  # boundary gaps extend flat, off the line by design
        out = linear_interp(TimeSeries(vals)).values
        tol = 4 * np.spacing(np.abs(line).max())
        assert np.all(np.abs(out - line) <= tol)


def test_spline_reproduces_cubic_at_interior_gaps():
    # oracle: evaluate the cubic itself at the blanked indices
    n = 101
    x = np.arange(n, dtype=float)
    cubic = 0.002 * x**3 - 0.09 * x**2 + 1.7 * x + 12.0
    vals = cubic.copy()
    vals[45:48] = np.nan
    vals[60] = np.nan
    out = spline_interp(TimeSeries(vals)).values
    for idx in (45, 46, 47, 60):
        assert abs(out[idx] - cubic[idx]) <= 1e-9 * max(1.0, abs(cubic[idx]))


def test_spline_extrapolates_at_boundaries():
    n = 40
    x = np.arange(n, dtype=float)
    vals = (0.1 * x**2).copy()
    vals[:3] = np.nan
    vals[-2:] = np.nan
    out = spline_interp(TimeSeries(vals)).values
    assert not np.isnan(out).any()
    # natural-spline extrapolation is linear, not flat
    assert out[0] != out[3]


def test_spline_too_few_points_falls_back_to_linear():
    vals = [nan, 1.0, nan, 3.0, nan]
    out = spline_interp(TimeSeries(vals))
    assert out.values.tolist() == linear_interp(TimeSeries(vals)).values.tolist()


# ---------------------------------------------------------------------------
# Degeneracy: KNN and Iterative equal Mean exactly
# ---------------------------------------------------------------------------


def test_knn_iterative_degenerate_to_mean_bitwise():
    rng = np.random.default_rng(23)
    for _ in range(100):
        gappy, _ = make_gappy(rng)
        s = TimeSeries(gappy)
        ref = mean_fill(s).values.tobytes()
        assert knn_fill(s, 5).values.tobytes() == ref
        assert iterative_fill(s, 10).values.tobytes() == ref


# ---------------------------------------------------------------------------
# Shared contract
# ---------------------------------------------------------------------------


def test_all_baselines_complete_output():
    rng = np.random.default_rng(24)
    for _ in range(50):
        gappy, _ = make_gappy(rng, sizes=(1, 2, 3, 4, 5, 6, 8), gap_prob=0.2)
        s = TimeSeries(gappy)
        for spec in ALL_METHODS:
            out = impute(spec, s)
            if spec.method is Method.KZ:
                continue  # may skip oversized gaps by design
            assert out.series.is_complete(), spec.label
            assert len(out.filled) == int(np.isnan(gappy).sum())


def test_all_missing_raises_everywhere():
    s = TimeSeries([nan, nan])
    for fn in (mean_fill, median_fill, ffill, bfill, linear_interp, spline_interp,
               knn_fill, iterative_fill):
        with pytest.raises(AllMissingError):
            fn(s)


def test_impute_preserves_present_values():
    rng = np.random.default_rng(25)
    gappy, _ = make_gappy(rng)
    s = TimeSeries(gappy)
    keep = ~np.isnan(gappy)
    for spec in ALL_METHODS:
        out = impute(spec, s).series.values
        assert np.array_equal(out[keep], gappy[keep])


def test_impute_notes_fallbacks():
    out = impute(ImputerSpec(Method.FORWARD_FILL), TimeSeries([nan, 7, 8]))
    assert any("backward" in note for note in out.notes)
    out = impute(ImputerSpec(Method.BACKWARD_FILL), TimeSeries([7, 8, nan]))
    assert any("forward" in note for note in out.notes)
    out = impute(ImputerSpec(Method.SPLINE_INTERPOLATE), TimeSeries([nan, 1.0, nan, 3.0]))
    assert any("linear" in note for note in out.notes)


def test_impute_kz_respects_ceiling():
    vals = [1.0] + [nan] * 7 + [2.0]
    out = impute(ImputerSpec(Method.KZ, {"max_gap_size": 5}), TimeSeries(vals))
    assert len(out.skipped) == 1 and not out.filled


# ---------------------------------------------------------------------------
# Spec validation
# ---------------------------------------------------------------------------


def test_spec_rejects_unknown_params():
    with pytest.raises(ValueError):
        ImputerSpec(Method.MEAN, {"k": 3})
    with pytest.raises(ValueError):
        ImputerSpec(Method.KNN, {"neighbors": 5})


def test_spec_rejects_bad_values():
    with pytest.raises(ValueError):
        ImputerSpec(Method.KNN, {"k": 0})
    with pytest.raises(ValueError):
        ImputerSpec(Method.KZ, {"max_gap_size": -1})
    with pytest.raises(ValueError):
        ImputerSpec(Method.SPLINE_INTERPOLATE, {"order": 9})


def test_spec_labels():
    assert ImputerSpec(Method.KZ).label == "KZImputer"
    assert ImputerSpec(Method.KNN, {"k": 5}).label == "KNN (k=5)"
    assert ImputerSpec(Method.ITERATIVE).label == "IterativeImputer"
