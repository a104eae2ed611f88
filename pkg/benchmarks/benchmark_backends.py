#!/usr/bin/env python3
"""Timing comparison between the compiled cascade core and the pure-Python
fallback.

Each workload re-seeds its random stream per repetition, so both backends
consume identical draws and the comparison is work-for-work. The table
reports the best wall time over the requested repetitions and the speedup
of the compiled core when it is available.

Usage:
    python3 benchmarks/benchmark_backends.py [--repeat N] [--scale X]
"""

import argparse
import time

from boltzmix import _backend
from boltzmix.cascade import run_tree, sample_M_infinity
from boltzmix.collision import isotropic_params
from boltzmix.rng import RandomStream
from boltzmix.spectral import solve_alpha

SEED = 20260823


def workloads(scale):
    """(label, fn) pairs covering the two backend entry points: full
    rotation-chain trees (linear and log accumulation) and weights-only
    mixing-weight draws."""
    params = isotropic_params(3, 0.25)
    alpha = solve_alpha(params).alpha
    n_tree = max(1, int(800 * scale))
    n_deep = max(1, int(8000 * scale))
    m_size = max(1, int(400 * scale))
    return [
        ("run_tree, %d splits" % n_tree,
         lambda rng: run_tree(n_tree, params, rng)),
        ("run_tree, %d splits (log scale)" % n_deep,
         lambda rng: run_tree(n_deep, params, rng)),
        ("sample_M_infinity, %d x depth 500" % m_size,
         lambda rng: sample_M_infinity(params, alpha, rng, size=m_size)),
    ]


def best_time(fn, repeat):
    best = float("inf")
    for r in range(repeat):
        rng = RandomStream(SEED, r)
        start = time.perf_counter()
        fn(rng)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="compare the compiled and pure-Python cascade cores")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per cell (best time is kept)")
    parser.add_argument("--scale", type=float, default=1.0,
                        help="multiply all workload sizes")
    args = parser.parse_args(argv)

    backends = ["python"]
    if _backend.has_compiled():
        backends.insert(0, "compiled")
    else:
        print("compiled core unavailable; timing the fallback only")

    rows = []
    for label, fn in workloads(args.scale):
        times = {}
        for name in backends:
            with _backend.force(name):
                times[name] = best_time(fn, args.repeat)
        rows.append((label, times))

    width = max(len(label) for label, _ in rows)
    header = "%-*s" % (width, "workload")
    for name in backends:
        header += "  %12s" % (name + " (s)")
    if len(backends) == 2:
        header += "  %8s" % "speedup"
    print(header)
    print("-" * len(header))
    for label, times in rows:
        line = "%-*s" % (width, label)
        for name in backends:
            line += "  %12.4f" % times[name]
        if len(backends) == 2:
            line += "  %7.1fx" % (times["python"] / times["compiled"])
        print(line)


if __name__ == "__main__":
    main()
