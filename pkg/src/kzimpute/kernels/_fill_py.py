"""Pure-Python fill kernel.

Semantics shared with the compiled kernel (and asserted equal in tests):

* Gaps are processed in ascending start order, each against a snapshot of
  the original series — another gap's cells always read as missing, whether
  it was filled before or after this one. This keeps the rules exactly
  mirror-symmetric under series reversal.
* Within a gap, cells fill in the order the rules prescribe, and later
  window reads see the gap's own earlier fills.
* Window sums accumulate in distance order from the anchor (nearest first),
  so a left-rule sum and its mirrored right-rule sum are bit-identical.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import AllMissingError, EmptyWindowError

POS_LEFT = 0
POS_MIDDLE = 1
POS_RIGHT = 2

_NAN = float("nan")


def _avg_after(values, own, gs, ge, anchor, k, n):
    total = 0.0
    count = 0
    for p in range(anchor + 1, min(anchor + 1 + k, n)):
        v = own[p - gs] if gs <= p < ge else values[p]
        if not math.isnan(v):
            total += v
            count += 1
    if count == 0:
        raise EmptyWindowError(f"no present values after index {anchor}")
    return total / count


def _avg_before(values, own, gs, ge, anchor, k, n):
    total = 0.0
    count = 0
    for p in range(anchor - 1, max(anchor - k, 0) - 1, -1):
        v = own[p - gs] if gs <= p < ge else values[p]
        if not math.isnan(v):
            total += v
            count += 1
    if count == 0:
        raise EmptyWindowError(f"no present values before index {anchor}")
    return total / count


def _subdivide(own, lo, hi):
    # lo/hi are gap-local indices whose cells are already filled
    if hi - lo < 2:
        return
    span = hi - lo
    pair_avg = (own[lo] + own[hi]) / 2.0
    if span % 2 == 0:
        mid = lo + span // 2
        own[mid] = pair_avg
        _subdivide(own, lo, mid)
        _subdivide(own, mid, hi)
    else:
        m1 = lo + (span - 1) // 2
        m2 = m1 + 1
        own[m1] = pair_avg
        own[m2] = pair_avg
        _subdivide(own, lo, m1)
        _subdivide(own, m2, hi)


def fill_gap(values: list, n: int, start: int, length: int, pos: int) -> list[float]:
    """Fill one gap; returns the gap's values in cell order (start..end-1).

    ``values`` is the untouched source snapshot; intra-gap visibility is
    handled through the returned buffer while it is being built.
    """
    own = [_NAN] * length
    gs, ge = start, start + length
    last = ge - 1

    if length == 1:
        if pos == POS_LEFT:
            own[0] = _avg_after(values, own, gs, ge, start, 3, n)
        elif pos == POS_RIGHT:
            own[0] = _avg_before(values, own, gs, ge, start, 3, n)
        else:
            own[0] = (values[start - 1] + values[start + 1]) / 2.0
    elif length == 2:
        if pos == POS_LEFT:
            own[1] = _avg_after(values, own, gs, ge, start + 1, 4, n)
            own[0] = _avg_after(values, own, gs, ge, start, 4, n)
        elif pos == POS_RIGHT:
            own[0] = _avg_before(values, own, gs, ge, start, 4, n)
            own[1] = _avg_before(values, own, gs, ge, start + 1, 4, n)
        else:
            own[0] = _avg_before(values, own, gs, ge, start, 3, n)
            own[1] = _avg_after(values, own, gs, ge, start + 1, 3, n)
    elif length == 3:
        if pos == POS_LEFT:
            for p in (last, start + 1, start):
                own[p - gs] = _avg_after(values, own, gs, ge, p, 5, n)
        elif pos == POS_RIGHT:
            for p in (start, start + 1, last):
                own[p - gs] = _avg_before(values, own, gs, ge, p, 5, n)
        else:
            own[0] = _avg_before(values, own, gs, ge, start, 5, n)
            own[2] = _avg_after(values, own, gs, ge, last, 5, n)
            own[1] = (own[0] + own[2]) / 2.0
    elif length == 4:
        if pos == POS_LEFT:
            for p in range(last, start - 1, -1):
                own[p - gs] = _avg_after(values, own, gs, ge, p, 5, n)
        elif pos == POS_RIGHT:
            for p in range(start, last + 1):
                own[p - gs] = _avg_before(values, own, gs, ge, p, 5, n)
        else:
            own[0] = _avg_before(values, own, gs, ge, start, 5, n)
            own[1] = _avg_before(values, own, gs, ge, start + 1, 5, n)
            own[3] = _avg_after(values, own, gs, ge, last, 5, n)
            own[2] = _avg_after(values, own, gs, ge, start + 2, 5, n)
    else:
        if pos == POS_LEFT:
            for p in range(last, start - 1, -1):
                own[p - gs] = _avg_after(values, own, gs, ge, p, 5, n)
        elif pos == POS_RIGHT:
            for p in range(start, last + 1):
                own[p - gs] = _avg_before(values, own, gs, ge, p, 5, n)
        else:
            own[0] = _avg_before(values, own, gs, ge, start, 5, n)
            own[length - 1] = _avg_after(values, own, gs, ge, last, 5, n)
            _subdivide(own, 0, length - 1)

    return own


def kz_fill(arr: np.ndarray, max_gap_size: int):
    """Fill every gap of length <= max_gap_size in a float64 array.

    Returns (out, filled, skipped) where ``out`` is a new array, ``filled``
    is [(index, value)] in ascending index order, and ``skipped`` is
    [(start, length)] for gaps beyond the ceiling, left untouched.
    """
    values = arr.tolist()
    n = len(values)

    gaps = []
    i = 0
    while i < n:
        if math.isnan(values[i]):
            j = i
            while j < n and math.isnan(values[j]):
                j += 1
            gaps.append((i, j - i))
            i = j
        else:
            i += 1

    if gaps and gaps[0][1] == n:
        raise AllMissingError("series has no present values")

    out = arr.copy()
    filled: list[tuple[int, float]] = []
    skipped: list[tuple[int, int]] = []
    for start, length in gaps:
        if length > max_gap_size:
            skipped.append((start, length))
            continue
        if start == 0:
            pos = POS_LEFT
        elif start + length == n:
            pos = POS_RIGHT
        else:
            pos = POS_MIDDLE
        own = fill_gap(values, n, start, length, pos)
        for off, v in enumerate(own):
            out[start + off] = v
            filled.append((start + off, v))
    return out, filled, skipped
