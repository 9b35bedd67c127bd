"""Time-series representation, gap detection, and windowed means.

A series is a fixed-length 1-D float64 array; NaN is the missing sentinel.
Gaps are maximal NaN runs classified by whether they touch the series start
(left), the series end (right), or neither (middle).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AllMissingError, EmptyWindowError


class GapPosition(enum.Enum):
    LEFT = "left"
    MIDDLE = "middle"
    RIGHT = "right"


class Direction(enum.Enum):
    PRECEDING = "preceding"
    FOLLOWING = "following"


class TimeSeries:
    """Immutable univariate series; missing values are NaN, present ones finite.

    Accepts any 1-D sequence of numbers; ``None`` entries map to NaN.
    Infinities are rejected so that NaN stays the only non-finite state.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(
            [np.nan if v is None else v for v in values]
            if not isinstance(values, np.ndarray)
            else values,
            dtype=np.float64,
        )
        if arr.ndim != 1:
            raise ValueError("series must be one-dimensional")
        if arr.size < 1:
            raise ValueError("series must hold at least one value")
        if np.isinf(arr).any():
            raise ValueError("series values must be finite or missing")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        """Read-only float64 view of the series."""
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def __len__(self) -> int:
        return self._values.size

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self._values)

    @property
    def missing_count(self) -> int:
        return int(np.isnan(self._values).sum())

    def is_complete(self) -> bool:
        return not np.isnan(self._values).any()

    def reversed(self) -> "TimeSeries":
        return TimeSeries(self._values[::-1])

    def __repr__(self) -> str:
        return f"TimeSeries(n={self.n}, missing={self.missing_count})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self._values.tobytes() == other._values.tobytes()

    def __hash__(self):
        return hash(self._values.tobytes())


@dataclass(frozen=True)
class GapSegment:
    """One maximal missing run: [start, start+length), with its position class."""

    start: int
    length: int
    position: GapPosition

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class Window:
    """Contiguous index range [start, stop) read relative to some anchor."""

    start: int
    stop: int
    direction: Direction

    def __len__(self) -> int:
        return max(0, self.stop - self.start)

    def indices(self) -> range:
        """Indices ordered by distance from the anchor (near first)."""
        if self.direction is Direction.PRECEDING:
            return range(self.stop - 1, self.start - 1, -1)
        return range(self.start, self.stop)


def scan_gaps(series: TimeSeries) -> list[GapSegment]:
    """All maximal missing runs in ascending start order.

    Raises AllMissingError when the whole series is missing, since no anchor
    data would exist for any rule.
    """
    mask = series.missing_mask
    if mask.all():
        raise AllMissingError("series has no present values")
    if not mask.any():
        return []
    n = series.n
    padded = np.diff(np.concatenate(([0], mask.view(np.int8), [0])))
    starts = np.flatnonzero(padded == 1)
    ends = np.flatnonzero(padded == -1)
    gaps = []
    for s, e in zip(starts.tolist(), ends.tolist()):
        if s == 0:
            pos = GapPosition.LEFT
        elif e == n:
            pos = GapPosition.RIGHT
        else:
            pos = GapPosition.MIDDLE
        gaps.append(GapSegment(start=s, length=e - s, position=pos))
    return gaps


def take_k_nearest(series: TimeSeries, anchor: int, k: int, direction: Direction) -> Window:
    """Window of up to k positions strictly before or after the anchor.

    Truncates at the series bounds; an empty result only surfaces later as
    EmptyWindowError when a mean is requested.
    """
    n = series.n
    if not 0 <= anchor < n:
        raise IndexError(f"anchor {anchor} out of bounds for series of length {n}")
    if k < 1:
        raise ValueError("k must be positive")
    if direction is Direction.FOLLOWING:
        return Window(start=min(anchor + 1, n), stop=min(anchor + 1 + k, n), direction=direction)
    return Window(start=max(anchor - k, 0), stop=anchor, direction=direction)


def cached_mean(series: TimeSeries, window: Window) -> float:
    """Arithmetic mean over the present values inside the window.

    Missing entries contribute neither to the sum nor the count. Values are
    accumulated in the window's distance order (nearest the anchor first),
    which keeps left/right rule variants exact mirrors of each other.
    """
    if len(window) == 0:
        raise ValueError("window is empty")
    if window.start < 0 or window.stop > series.n:
        raise ValueError("window out of bounds")
    values = series.values
    total = 0.0
    count = 0
    for p in window.indices():
        v = values[p]
        if not math.isnan(v):
            total += v
            count += 1
    if count == 0:
        raise EmptyWindowError(f"no present values in [{window.start}, {window.stop})")
    return total / count
