"""Engine rules: hand-computed vectors, dispatch, and structural properties."""

from __future__ import annotations

import math
import subprocess
import sys

import numpy as np
import pytest

from kzimpute import (
    AllMissingError,
    GapPosition,
    GapSegment,
    KZConfig,
    KZImputer,
    TimeSeries,
    impute_gap_1,
    impute_gap_2,
    impute_gap_3,
    impute_gap_4,
    impute_gap_5_plus,
    kz_impute,
    scan_gaps,
)
from kzimpute.kernels import _fill_py

try:
    from kzimpute.kernels import _fill_cy
except ImportError:
    _fill_cy = None

from kz_oracle import oracle_impute
from synth import isolated_gap_series, make_gappy

nan = float("nan")


def within_ulps(a, b, ulps=4):
    if a == b:
        return True
    return abs(a - b) <= ulps * np.spacing(max(abs(a), abs(b)))


# ---------------------------------------------------------------------------
# Hand-computed vectors (frozen via the independent oracle)
# ---------------------------------------------------------------------------


def test_double_left_stepwise():
    out = kz_impute(TimeSeries([nan, nan, 4, 5, 6, 7]))
    assert abs(out.series.values[1] - 5.5) <= 1e-12
    assert abs(out.series.values[0] - 5.125) <= 1e-12


def test_double_middle_one_sided_means():
    out = kz_impute(TimeSeries([1, 2, 3, nan, nan, 4, 5, 6]))
    assert abs(out.series.values[3] - 2.0) <= 1e-12
    assert abs(out.series.values[4] - 5.0) <= 1e-12


def test_triple_middle_anchors_and_centre():
    out = kz_impute(TimeSeries([1, 2, 3, 4, 5, nan, nan, nan, 6, 7, 8, 9, 10]))
    assert abs(out.series.values[5] - 3.0) <= 1e-12
    assert abs(out.series.values[6] - 5.5) <= 1e-12
    assert abs(out.series.values[7] - 8.0) <= 1e-12


def test_quadruple_middle_outer_in_pairs():
    out = kz_impute(TimeSeries([1, 1, 1, 1, 1, nan, nan, nan, nan, 9, 9, 9, 9, 9]))
    assert np.allclose(out.series.values[5:9], [1.0, 1.0, 9.0, 9.0], rtol=0, atol=1e-12)


def test_pentuple_middle_midpoint_chain():
    out = kz_impute(TimeSeries([0, 0, 0, 0, 0, nan, nan, nan, nan, nan, 8, 8, 8, 8, 8]))
    assert np.allclose(out.series.values[5:10], [0.0, 2.0, 4.0, 6.0, 8.0], rtol=0, atol=1e-12)


def test_single_gap_trivials():
    assert kz_impute(TimeSeries([nan, 2, 4, 6, 8])).series.values[0] == 4.0
    assert kz_impute(TimeSeries([1, nan, 3])).series.values[1] == 2.0
    assert kz_impute(TimeSeries([10, nan, 20, 30, 40])).series.values[1] == 15.0
    assert kz_impute(TimeSeries([2, 4, 6, nan])).series.values[3] == 4.0
    assert kz_impute(TimeSeries([nan, 3, 6, 9])).series.values[0] == 6.0


def test_constant_runs_fill_with_constant():
    for vals in (
        [7, 7, nan, nan, 7, 7, 7],
        [2, 2, 2, 2, 2, nan, nan, nan],
        [nan, nan, nan, nan, 5, 5, 5, 5, 5, 5],
    ):
        out = kz_impute(TimeSeries(vals)).series.values
        assert np.allclose(out, out[~np.isnan(out)][0], rtol=0, atol=1e-12)


# ---------------------------------------------------------------------------
# Per-size rule surface
# ---------------------------------------------------------------------------


def test_rule_ops_validate_length():
    s = TimeSeries([1, nan, nan, 4, 5, 6])
    gap = scan_gaps(s)[0]
    with pytest.raises(ValueError):
        impute_gap_1(s, gap)
    fills = impute_gap_2(s, gap)
    assert [i for i, _ in fills] == [1, 2]


def test_rule_ops_match_engine():
    rng = np.random.default_rng(42)
    by_length = {1: impute_gap_1, 2: impute_gap_2, 3: impute_gap_3, 4: impute_gap_4,
                 5: impute_gap_5_plus, 6: impute_gap_5_plus, 7: impute_gap_5_plus}
    seen = set()
    for _ in range(400):
        gappy, _ = make_gappy(rng, sizes=(1, 2, 3, 4, 5, 6, 7), gap_prob=0.2)
        s = TimeSeries(gappy)
        engine = kz_impute(s, KZConfig(max_gap_size=7))
        filled = dict(engine.filled)
        for gap in scan_gaps(s):
            seen.add((min(gap.length, 5), gap.position))
            fills = by_length[gap.length](s, gap)
            for idx, val in fills:
                assert val == filled[idx]
    # every (size, position) combination was exercised
    assert len(seen) >= 13


def test_rule_ops_reject_mismatched_gap():
    s = TimeSeries([1, 2, 3, 4, 5])
    with pytest.raises(ValueError):
        impute_gap_1(s, GapSegment(1, 1, GapPosition.MIDDLE))


# ---------------------------------------------------------------------------
# kz_impute contract
# ---------------------------------------------------------------------------


def test_idempotence_bit_identical():
    rng = np.random.default_rng(7)
    vals = rng.uniform(-5, 5, 64)
    out = kz_impute(TimeSeries(vals))
    assert out.series.values.tobytes() == vals.tobytes()
    assert out.filled == ()
    assert out.skipped == ()


def test_all_missing_raises():
    with pytest.raises(AllMissingError):
        kz_impute(TimeSeries([nan, nan, nan]))


def test_oversized_gap_skipped_untouched():
    vals = [1.0, nan, nan, nan, nan, nan, nan, 2.0]
    out = kz_impute(TimeSeries(vals), KZConfig(max_gap_size=5))
    assert len(out.skipped) == 1
    assert out.skipped[0].start == 1 and out.skipped[0].length == 6
    assert np.isnan(out.series.values[1:7]).all()
    assert out.filled == ()


def test_raised_ceiling_fills_long_gaps():
    vals = [1.0, nan, nan, nan, nan, nan, nan, 2.0]
    out = kz_impute(TimeSeries(vals), KZConfig(max_gap_size=6))
    assert out.series.is_complete()


def test_filled_indices_were_missing_and_now_present():
    rng = np.random.default_rng(11)
    for _ in range(100):
        gappy, _ = make_gappy(rng)
        s = TimeSeries(gappy)
        out = kz_impute(s)
        for idx, val in out.filled:
            assert math.isnan(gappy[idx])
            assert out.series.values[idx] == val
        for seg in out.skipped:
            assert np.isnan(out.series.values[seg.start : seg.end]).all()


def test_completeness_when_gaps_fit_ceiling():
    rng = np.random.default_rng(13)
    for _ in range(200):
        gappy, _ = make_gappy(rng)
        assert kz_impute(TimeSeries(gappy)).series.is_complete()


def test_kzimputer_wrapper():
    imp = KZImputer(max_gap_size=3)
    out = imp.impute(TimeSeries([1, nan, 3]))
    assert out.series.values[1] == 2.0


def test_config_validation():
    with pytest.raises(ValueError):
        KZConfig(max_gap_size=0)


def test_tiny_series_boundary_truncation():
    assert kz_impute(TimeSeries([nan, 5.0])).series.values[0] == 5.0
    assert kz_impute(TimeSeries([5.0, nan])).series.values[1] == 5.0
    out = kz_impute(TimeSeries([nan, nan, 7.0]))
    assert np.allclose(out.series.values, 7.0)


# ---------------------------------------------------------------------------
# Structural properties
# ---------------------------------------------------------------------------


def test_convex_hull_bound():
    rng = np.random.default_rng(500)
    for _ in range(500):
        gappy, _ = make_gappy(rng)
        out = kz_impute(TimeSeries(gappy)).series.values
        present = gappy[~np.isnan(gappy)]
        fills = out[np.isnan(gappy)]
        fills = fills[~np.isnan(fills)]
        if fills.size:
            assert fills.min() >= present.min()
            assert fills.max() <= present.max()


def test_constant_preservation():
    rng = np.random.default_rng(501)
    for _ in range(500):
        gappy, _ = make_gappy(rng)
        c = float(rng.uniform(-100, 100)) or 1.0
        vals = gappy.copy()
        vals[~np.isnan(gappy)] = c
        out = kz_impute(TimeSeries(vals)).series.values
        for v in out[np.isnan(vals)]:
            if not math.isnan(v):
                assert within_ulps(v, c)


def test_reversal_equivariance():
    rng = np.random.default_rng(502)
    for _ in range(500):
        gappy, _ = make_gappy(rng, sizes=(1, 2, 3, 4, 5, 6), gap_prob=0.2)
        fwd = kz_impute(TimeSeries(gappy), KZConfig(max_gap_size=6)).series.values
        rev = kz_impute(TimeSeries(gappy[::-1]), KZConfig(max_gap_size=6)).series.values[::-1]
        for a, b in zip(fwd, rev):
            if math.isnan(a):
                assert math.isnan(b)
            else:
                assert within_ulps(a, b)


def test_locality():
    rng = np.random.default_rng(503)
    for _ in range(500):
        length = int(rng.integers(1, 6))
        radius = max(5, length) + length
        gappy, _, start = isolated_gap_series(rng, length, margin=radius + 3)
        before = kz_impute(TimeSeries(gappy)).series.values[start : start + length]
        mutated = gappy.copy()
        far = np.flatnonzero(~np.isnan(gappy))
        far = far[(far < start - radius) | (far >= start + length + radius)]
        pick = int(rng.choice(far))
        mutated[pick] = mutated[pick] + rng.uniform(100.0, 200.0)
        after = kz_impute(TimeSeries(mutated)).series.values[start : start + length]
        assert before.tobytes() == after.tobytes()


# ---------------------------------------------------------------------------
# Oracle agreement and kernel backends
# ---------------------------------------------------------------------------


def test_matches_naive_oracle():
    rng = np.random.default_rng(504)
    for _ in range(300):
        gappy, _ = make_gappy(rng)
        out = kz_impute(TimeSeries(gappy)).series.values
        expected, _ = oracle_impute(
            [None if math.isnan(v) else float(v) for v in gappy], 5
        )
        for got, want in zip(out, expected):
            if want is None or (isinstance(want, float) and math.isnan(want)):
                assert math.isnan(got)
            else:
                assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


@pytest.mark.skipif(_fill_cy is None, reason="compiled kernel not built")
def test_backends_bit_identical():
    rng = np.random.default_rng(505)
    for _ in range(300):
        gappy, _ = make_gappy(rng, sizes=(1, 2, 3, 4, 5, 6, 7), gap_prob=0.2)
        for ceiling in (1, 3, 5, 7):
            out_py, fill_py, skip_py = _fill_py.kz_fill(gappy, ceiling)
            out_cy, fill_cy, skip_cy = _fill_cy.kz_fill(gappy, ceiling)
            assert out_py.tobytes() == out_cy.tobytes()
            assert fill_py == fill_cy
            assert skip_py == skip_cy


def test_backend_env_override():
    code = (
        "import kzimpute, numpy as np\n"
        "assert kzimpute.active_backend() == 'py'\n"
        "out = kzimpute.kz_impute(kzimpute.TimeSeries([1.0, float('nan'), 3.0]))\n"
        "assert out.series.values[1] == 2.0\n"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "KZIMPUTE_BACKEND": "py"},
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
