#!/usr/bin/env python3
"""Compare the compiled fill kernel against the pure-Python fallback.

Times the whole per-series fill (scan + rule dispatch + stepwise fills)
over synthetic workloads and prints a speedup table. The two kernels are
bit-identical by contract; this script also spot-checks that.

Usage: python benchmarks/backend_bench.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from kzimpute.kernels import _fill_py

try:
    from kzimpute.kernels import _fill_cy
except ImportError:
    _fill_cy = None


def gappy_workload(n: int, missing_fraction: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    values = rng.uniform(1.0, 100.0, n)
    target = int(missing_fraction * n)
    blanked = 0
    i = int(rng.integers(0, 6))
    while blanked < target and i < n - 1:
        length = min(int(rng.integers(1, 6)), n - 1 - i)
        values[i : i + length] = np.nan
        blanked += length
        i += length + 1 + int(rng.integers(0, 8))
    return values


def time_kernel(kernel, arr: np.ndarray, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel.kz_fill(arr, 5)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run(repeats: int) -> None:
    if _fill_cy is None:
        print("compiled kernel not built; run `pip install -e .` first")
        return
    print(f"{'n':>8} {'missing':>8} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for n in (1_000, 10_000, 100_000):
        for fraction in (0.1, 0.4):
            arr = gappy_workload(n, fraction, seed=n + int(fraction * 10))
            out_py, fills_py, skip_py = _fill_py.kz_fill(arr, 5)
            out_cy, fills_cy, skip_cy = _fill_cy.kz_fill(arr, 5)
            assert out_py.tobytes() == out_cy.tobytes(), "backends disagree"
            assert fills_py == fills_cy and skip_py == skip_cy
            t_py = time_kernel(_fill_py, arr, repeats)
            t_cy = time_kernel(_fill_cy, arr, repeats)
            print(
                f"{n:>8} {fraction:>8.0%} {t_py * 1e3:>10.3f}ms {t_cy * 1e3:>10.3f}ms "
                f"{t_py / t_cy:>7.1f}x"
            )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    run(parser.parse_args().repeats)
