"""Adaptive gap filling: dispatch on (gap length, position) to size-specific rules.

Shoulder sizes grow with the gap: single gaps average 3 neighbours, double
gaps 4, triple and longer 5. Boundary gaps fill stepwise from the anchored
side inward, each new cell becoming data for the next; middle gaps fill
outer cells from their own side and derive interior cells by averaging.
Gaps longer than the configured ceiling are left untouched and reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .kernels import _fill_py
from .series import GapPosition, GapSegment, TimeSeries

_POS_CODE = {
    GapPosition.LEFT: _fill_py.POS_LEFT,
    GapPosition.MIDDLE: _fill_py.POS_MIDDLE,
    GapPosition.RIGHT: _fill_py.POS_RIGHT,
}


@dataclass(frozen=True)
class KZConfig:
    """Engine options; max_gap_size is the largest gap the rules will fill."""

    max_gap_size: int = 5

    def __post_init__(self):
        if self.max_gap_size < 1:
            raise ValueError("max_gap_size must be >= 1")


@dataclass(frozen=True)
class ImputationOutcome:
    """Result of an imputation run.

    filled holds (index, value) for every cell that was missing and is now
    present; skipped lists gaps left untouched. notes carry method-specific
    footnotes (boundary fallbacks and the like) for report consumers.
    """

    series: TimeSeries
    filled: tuple[tuple[int, float], ...]
    skipped: tuple[GapSegment, ...] = ()
    notes: tuple[str, ...] = field(default=(), kw_only=True)

    @property
    def is_complete(self) -> bool:
        return self.series.is_complete()


def _check_gap(series: TimeSeries, gap: GapSegment) -> None:
    mask = series.missing_mask
    if not mask[gap.start : gap.end].all():
        raise ValueError("gap indices are not all missing in the series")
    if gap.start > 0 and mask[gap.start - 1]:
        raise ValueError("gap is not maximal: cell before start is missing")
    if gap.end < series.n and mask[gap.end]:
        raise ValueError("gap is not maximal: cell after end is missing")


def _fill_rule(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    values = series.values.tolist()
    own = _fill_py.fill_gap(values, series.n, gap.start, gap.length, _POS_CODE[gap.position])
    return [(gap.start + off, v) for off, v in enumerate(own)]


def impute_gap_1(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    """Single cell: mean of 3 following (left), the 2 neighbours (middle),
    or 3 preceding (right)."""
    if gap.length != 1:
        raise ValueError("impute_gap_1 requires a gap of length 1")
    _check_gap(series, gap)
    return _fill_rule(series, gap)


def impute_gap_2(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    """Two cells: stepwise 4-neighbour means at boundaries; one-sided
    3-neighbour means for middle gaps."""
    if gap.length != 2:
        raise ValueError("impute_gap_2 requires a gap of length 2")
    _check_gap(series, gap)
    return _fill_rule(series, gap)


def impute_gap_3(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    """Three cells: stepwise 5-neighbour means at boundaries; middle gaps
    anchor both ends and average them for the centre."""
    if gap.length != 3:
        raise ValueError("impute_gap_3 requires a gap of length 3")
    _check_gap(series, gap)
    return _fill_rule(series, gap)


def impute_gap_4(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    """Four cells: stepwise 5-neighbour means at boundaries; middle gaps fill
    outer-in pairs with no centre average (even length)."""
    if gap.length != 4:
        raise ValueError("impute_gap_4 requires a gap of length 4")
    _check_gap(series, gap)
    return _fill_rule(series, gap)


def impute_gap_5_plus(series: TimeSeries, gap: GapSegment) -> list[tuple[int, float]]:
    """Five or more cells: stepwise 5-neighbour means at boundaries; middle
    gaps anchor both ends and fill the interior by midpoint subdivision."""
    if gap.length < 5:
        raise ValueError("impute_gap_5_plus requires a gap of length >= 5")
    _check_gap(series, gap)
    return _fill_rule(series, gap)


def kz_impute(series: TimeSeries, config: KZConfig | None = None) -> ImputationOutcome:
    """Fill every gap no longer than config.max_gap_size.

    Gaps are processed in ascending start order, each one computed against
    the original series (a neighbouring gap's cells read as missing either
    way), so results are independent of processing direction. Oversized
    gaps are reported in ``skipped`` and never partially filled.
    """
    if config is None:
        config = KZConfig()
    out, filled, skipped_raw = kernels.kz_fill(series.values, config.max_gap_size)
    n = series.n
    skipped = []
    for start, length in skipped_raw:
        if start == 0:
            pos = GapPosition.LEFT
        elif start + length == n:
            pos = GapPosition.RIGHT
        else:
            pos = GapPosition.MIDDLE
        skipped.append(GapSegment(start=start, length=length, position=pos))
    return ImputationOutcome(
        series=TimeSeries(out),
        filled=tuple(filled),
        skipped=tuple(skipped),
    )


class KZImputer:
    """Convenience object wrapper around :func:`kz_impute`."""

    def __init__(self, max_gap_size: int = 5):
        self.config = KZConfig(max_gap_size=max_gap_size)

    def impute(self, series: TimeSeries) -> ImputationOutcome:
        return kz_impute(series, self.config)


__all__ = [
    "KZConfig",
    "ImputationOutcome",
    "KZImputer",
    "kz_impute",
    "impute_gap_1",
    "impute_gap_2",
    "impute_gap_3",
    "impute_gap_4",
    "impute_gap_5_plus",
]
