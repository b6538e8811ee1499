#!/usr/bin/env python3
"""Benchmark the compiled counting kernel against the numpy fallback.

The workload is the hot loop of every Monte Carlo angle measurement:
classify Gaussian sample rows against a cone's facet matrix.  Both
backends must return identical counts; the compiled kernel is just
faster.

    python benchmarks/bench_kernel.py --samples 4000000 --dim 4
"""

import argparse
import time

import numpy as np

from ccl import _angle_kernel_py

try:
    from ccl import _angle_kernel
except ImportError:
    _angle_kernel = None


def bench(fn, points, facets, eps, repeats):
    best = float("inf")
    count = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        count = fn(points, facets, eps)
        best = min(best, time.perf_counter() - t0)
    return count, best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=4_000_000)
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    points = np.ascontiguousarray(rng.standard_normal((args.samples, args.dim)))
    # facet matrix of a generic simplicial cone
    facets = np.ascontiguousarray(
        np.linalg.inv(rng.standard_normal((args.dim, args.dim))
                      + 3 * np.eye(args.dim)).T)
    eps = 1e-9

    n_py, t_py = bench(_angle_kernel_py.count_nonnegative, points, facets,
                       eps, args.repeats)
    rate_py = args.samples / t_py
    print(f"python  backend: count={n_py}  best={t_py * 1e3:8.2f} ms  "
          f"{rate_py / 1e6:7.1f} Msamples/s")

    if _angle_kernel is None:
        print("cython  backend: not built")
        return

    n_cy, t_cy = bench(_angle_kernel.count_nonnegative, points, facets,
                       eps, args.repeats)
    rate_cy = args.samples / t_cy
    print(f"cython  backend: count={n_cy}  best={t_cy * 1e3:8.2f} ms  "
          f"{rate_cy / 1e6:7.1f} Msamples/s")
    assert n_py == n_cy, "backends disagree"
    print(f"speedup: {t_py / t_cy:.2f}x  (counts identical)")


if __name__ == "__main__":
    main()
