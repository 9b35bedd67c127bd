# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fill kernel; mirrors ``_fill_py`` operation for operation.

Same snapshot semantics, same fill order, same distance-ordered window
sums — the test suite asserts the two backends are bit-identical.
"""

from libc.math cimport isnan

import numpy as np

from ..errors import AllMissingError, EmptyWindowError

POS_LEFT = 0
POS_MIDDLE = 1
POS_RIGHT = 2


cdef double _avg_after(const double[::1] values, double[::1] own,
                       Py_ssize_t gs, Py_ssize_t ge, Py_ssize_t anchor,
                       Py_ssize_t k, Py_ssize_t n) except *:
    cdef double total = 0.0
    cdef double v
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t p
    cdef Py_ssize_t stop = anchor + 1 + k
    if stop > n:
        stop = n
    for p in range(anchor + 1, stop):
        if gs <= p < ge:
            v = own[p - gs]
        else:
            v = values[p]
        if not isnan(v):
            total += v
            count += 1
    if count == 0:
        raise EmptyWindowError(f"no present values after index {anchor}")
    return total / count


cdef double _avg_before(const double[::1] values, double[::1] own,
                        Py_ssize_t gs, Py_ssize_t ge, Py_ssize_t anchor,
                        Py_ssize_t k, Py_ssize_t n) except *:
    cdef double total = 0.0
    cdef double v
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t p
    cdef Py_ssize_t stop = anchor - k
    if stop < 0:
        stop = 0
    for p in range(anchor - 1, stop - 1, -1):
        if gs <= p < ge:
            v = own[p - gs]
        else:
            v = values[p]
        if not isnan(v):
            total += v
            count += 1
    if count == 0:
        raise EmptyWindowError(f"no present values before index {anchor}")
    return total / count


cdef void _subdivide(double[::1] own, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t span, mid, m1, m2
    cdef double pair_avg
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


cdef void _fill_gap(const double[::1] values, double[::1] own,
                    Py_ssize_t start, Py_ssize_t length, int pos,
                    Py_ssize_t n) except *:
    cdef Py_ssize_t gs = start
    cdef Py_ssize_t ge = start + length
    cdef Py_ssize_t last = ge - 1
    cdef Py_ssize_t p

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
            own[2] = _avg_after(values, own, gs, ge, last, 5, n)
            own[1] = _avg_after(values, own, gs, ge, start + 1, 5, n)
            own[0] = _avg_after(values, own, gs, ge, start, 5, n)
        elif pos == POS_RIGHT:
            own[0] = _avg_before(values, own, gs, ge, start, 5, n)
            own[1] = _avg_before(values, own, gs, ge, start + 1, 5, n)
            own[2] = _avg_before(values, own, gs, ge, last, 5, n)
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


def kz_fill(arr, max_gap_size):
    """Drop-in replacement for the pure-Python ``kz_fill``."""
    src_arr = np.ascontiguousarray(arr, dtype=np.float64)
    out_arr = src_arr.copy()
    cdef const double[::1] values = src_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t ceiling = max_gap_size
    cdef Py_ssize_t i = 0, j, start, length, off
    cdef int pos

    gaps = []
    while i < n:
        if isnan(values[i]):
            j = i
            while j < n and isnan(values[j]):
                j += 1
            gaps.append((i, j - i))
            i = j
        else:
            i += 1

    if gaps and gaps[0][1] == n:
        raise AllMissingError("series has no present values")

    filled = []
    skipped = []
    cdef double[::1] own
    for start, length in gaps:
        if length > ceiling:
            skipped.append((start, length))
            continue
        if start == 0:
            pos = POS_LEFT
        elif start + length == n:
            pos = POS_RIGHT
        else:
            pos = POS_MIDDLE
        own_arr = np.full(length, np.nan)
        own = own_arr
        _fill_gap(values, own, start, length, pos, n)
        for off in range(length):
            out[start + off] = own[off]
            filled.append((start + off, own[off]))
    return out_arr, filled, skipped
