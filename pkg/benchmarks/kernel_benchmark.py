#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths (the per-partition greedy evaluation grid and the
exhaustive subset scan) on seeded random instances and prints a table with
the speedup.  Run after `pip install -e . --no-build-isolation`:

    python benchmarks/kernel_benchmark.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from colmedian import Instance, kernels, _pykernels
from colmedian.epas import _deterministic_hints, _solver_arrays, cost_bounds, guess_windows
from colmedian.voronoi import build_voronoi


def random_metric_instance(rng, facilities, clients, ell):
    size = facilities + clients
    raw = rng.uniform(0.05, 1.0, size=(size, size))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    dist = raw.copy()
    for k in range(size):
        np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :], out=dist)
    return Instance(facilities, clients, dist, ell)


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_partition_grid(impl, inst, eps):
    vor = build_voronoi(inst)
    arrays = _solver_arrays(inst, vor)
    hints = _deterministic_hints(inst.num_facilities, eps, inst.ell)
    lower, upper, _ = cost_bounds(inst, vor)
    d_min = float(inst.dist[inst.dist > 0].min())
    windows = guess_windows(lower, upper, d_min)

    def run():
        for a, b in hints:
            for w in windows:
                impl.evaluate_partition(*arrays, a, b, eps, inst.ell, w.d_value)

    return run, len(hints) * len(windows)


def bench_exhaustive(impl, inst):
    dcf = np.array(inst.client_facility, dtype=np.float64, order="C")

    def run():
        impl.exhaustive_best(dcf, inst.num_facilities, inst.ell)

    return run, 1


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if kernels.BACKEND != "cython":
        print("compiled core not available; nothing to compare against")
        print("(build it with: pip install -e . --no-build-isolation)")
        return

    rng = np.random.default_rng(args.seed)
    cases = [
        ("grid m=10 n=15 ell=2 eps=0.5", bench_partition_grid,
         random_metric_instance(rng, 10, 15, 2), (0.5,)),
        ("grid m=10 n=15 ell=3 eps=0.2", bench_partition_grid,
         random_metric_instance(rng, 10, 15, 3), (0.2,)),
        ("grid m=14 n=40 ell=3 eps=0.3", bench_partition_grid,
         random_metric_instance(rng, 14, 40, 3), (0.3,)),
        ("exhaustive m=16 n=25 ell=5", bench_exhaustive,
         random_metric_instance(rng, 16, 25, 5), ()),
        ("exhaustive m=20 n=30 ell=4", bench_exhaustive,
         random_metric_instance(rng, 20, 30, 4), ()),
    ]

    print(f"{'case':38} {'evals':>6} {'cython':>10} {'python':>10} {'speedup':>8}")
    for name, setup, inst, extra in cases:
        run_c, evals = setup(kernels._impl, inst, *extra)
        run_p, _ = setup(_pykernels, inst, *extra)
        t_c = time_call(run_c, args.repeats)
        t_p = time_call(run_p, args.repeats)
        print(
            f"{name:38} {evals:>6} {t_c * 1e3:>9.2f}ms {t_p * 1e3:>9.2f}ms "
            f"{t_p / t_c:>7.1f}x"
        )


if __name__ == "__main__":
    main()
