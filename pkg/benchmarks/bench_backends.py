"""Timing comparison of the JIT-compiled kernels against the pure-Python path.

Runs each hot kernel through the numba dispatcher and through its
uncompiled ``.py_func``, checks the outputs are bit-identical, and prints
a timing table. Run with the default backend::

    python benchmarks/bench_backends.py

Requires numba; the comparison is meaningless on the numpy backend.
"""

import argparse
import sys
import time

import numpy as np

from titlesim import USING_NUMBA
from titlesim._kernels import (
    pairwise_euclidean,
    rows_euclidean,
    solve_transport_flows,
    weighted_centroid,
)


def time_best(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def as_bytes(result) -> bytes:
    if isinstance(result, tuple):
        return b"".join(as_bytes(part) for part in result)
    return np.asarray(result, dtype=np.float64).tobytes()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing repetitions (best kept)")
    args = parser.parse_args(argv)

    if not USING_NUMBA:
        print("numba backend not active; unset TITLESIM_BACKEND and rerun", file=sys.stderr)
        return 1

    rng = np.random.default_rng(2024)
    a = rng.normal(size=(300, 64))
    b = rng.normal(size=(200, 64))
    rows = rng.normal(size=(10_000, 16))
    q = rng.normal(size=16)
    points = rng.normal(size=(10, 16))
    weights = rng.random(10)
    weights /= weights.sum()
    supplies = rng.random(10)
    supplies /= supplies.sum()
    demands = rng.random(10)
    demands /= demands.sum()
    costs = pairwise_euclidean(points, rng.normal(size=(10, 16)))

    cases = [
        ("pairwise_euclidean 300x200x64", pairwise_euclidean, (a, b)),
        ("rows_euclidean 10000x16", rows_euclidean, (rows, q)),
        ("weighted_centroid 10x16", weighted_centroid, (points, weights)),
        ("solve_transport_flows 10x10", solve_transport_flows, (supplies, demands, costs)),
    ]

    # warm-up compiles everything before any timing
    for _, fn, fn_args in cases:
        fn(*fn_args)

    print(f"{'kernel':<34}{'numba':>12}{'python':>12}{'speedup':>10}")
    for name, fn, fn_args in cases:
        if as_bytes(fn(*fn_args)) != as_bytes(fn.py_func(*fn_args)):
            print(f"{name}: backend outputs differ", file=sys.stderr)
            return 1
        jit_s = time_best(fn, fn_args, args.repeats)
        py_s = time_best(fn.py_func, fn_args, args.repeats)
        print(f"{name:<34}{jit_s * 1e3:>10.3f}ms{py_s * 1e3:>10.3f}ms{py_s / jit_s:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
