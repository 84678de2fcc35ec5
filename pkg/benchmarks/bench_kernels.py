"""Benchmark the numba kernels against their pure-numpy equivalents.

Runs every kernel pair on identical inputs, times repeated calls after a JIT
warmup, and checks that the two backends agree numerically.  Works whether or
not numba is importable; with ``LEGDIFF_NO_NUMBA=1`` (or numba missing) only
the numpy column is produced.

Usage::

    python benchmarks/bench_kernels.py [--degree 40] [--points 4000] [--repeats 30]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from legdiff import _kernels
from legdiff._kernels import (
    NUMBA_AVAILABLE,
    USING_NUMBA,
    np_legendre_table,
    np_mueller_step_matrix,
    np_series_eval_grid,
    np_series_eval_points,
    np_weighted_projection,
)


def _time_call(func, args, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _relative_gap(a, b):
    scale = max(float(np.max(np.abs(a))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale


def run_benchmark(degree=40, points=4000, repeats=30, seed=0):
    """Time each kernel pair and verify agreement.

    Returns a dict with per-kernel numpy/numba timings (seconds, best of
    ``repeats``), speedups, and the worst relative disagreement observed.
    """
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1.0, 1.0, points)
    tau = rng.uniform(-1.0, 1.0, points)
    grid_t = rng.uniform(-1.0, 1.0, 256)
    grid_tau = rng.uniform(-1.0, 1.0, 256)
    weights = rng.uniform(0.0, 1.0, points)
    values = rng.normal(size=points)
    coeffs = rng.normal(size=(degree + 1, degree + 1))

    cases = {
        "legendre_table": (
            np_legendre_table,
            _kernels.nb_legendre_table,
            (degree, t),
        ),
        "weighted_projection": (
            np_weighted_projection,
            _kernels.nb_weighted_projection,
            (values, weights, t, degree),
        ),
        "mueller_step_matrix": (
            np_mueller_step_matrix,
            _kernels.nb_mueller_step_matrix,
            (coeffs,),
        ),
        "series_eval_grid": (
            np_series_eval_grid,
            _kernels.nb_series_eval_grid,
            (coeffs, grid_t, grid_tau),
        ),
        "series_eval_points": (
            np_series_eval_points,
            _kernels.nb_series_eval_points,
            (coeffs, t, tau),
        ),
    }

    results = {
        "degree": degree,
        "points": points,
        "repeats": repeats,
        "numba_available": NUMBA_AVAILABLE,
        "using_numba": USING_NUMBA,
        "kernels": {},
        "worst_relative_gap": 0.0,
    }

    for name, (np_func, nb_func, args) in cases.items():
        entry = {"numpy_time": _time_call(np_func, args, repeats)}
        if USING_NUMBA:
            nb_func(*args)  # warmup: trigger JIT compilation outside the timing
            entry["numba_time"] = _time_call(nb_func, args, repeats)
            entry["speedup"] = entry["numpy_time"] / entry["numba_time"]
            gap = _relative_gap(np.asarray(np_func(*args)), np.asarray(nb_func(*args)))
            entry["relative_gap"] = gap
            results["worst_relative_gap"] = max(results["worst_relative_gap"], gap)
        results["kernels"][name] = entry
    return results


def print_benchmark_results(results):
    width = 66
    print("=" * width)
    print(
        f"Kernel benchmark: degree={results['degree']}, "
        f"points={results['points']}, best of {results['repeats']}"
    )
    print(f"numba available: {results['numba_available']}  "
          f"(active: {results['using_numba']})")
    print("=" * width)
    header = f"{'kernel':<22}{'numpy':>11}{'numba':>11}{'speedup':>9}{'rel gap':>11}"
    print(header)
    print("-" * width)
    for name, entry in results["kernels"].items():
        numpy_ms = entry["numpy_time"] * 1e3
        if "numba_time" in entry:
            numba_ms = entry["numba_time"] * 1e3
            print(
                f"{name:<22}{numpy_ms:>9.3f}ms{numba_ms:>9.3f}ms"
                f"{entry['speedup']:>8.1f}x{entry['relative_gap']:>11.1e}"
            )
        else:
            print(f"{name:<22}{numpy_ms:>9.3f}ms{'-':>11}{'-':>9}{'-':>11}")
    print("-" * width)
    if results["using_numba"]:
        print(f"worst relative disagreement: {results['worst_relative_gap']:.2e}")
    else:
        print("numba column skipped (disabled or unavailable)")
    print("=" * width)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--degree", type=int, default=40)
    parser.add_argument("--points", type=int, default=4000)
    parser.add_argument("--repeats", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    results = run_benchmark(
        degree=args.degree, points=args.points, repeats=args.repeats, seed=args.seed
    )
    print_benchmark_results(results)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
