#!/usr/bin/env python3
"""Benchmark the walker kernels: compiled extension vs pure-Python twin.

Both backends draw identical sample streams, so the timed work is the same;
the output cross-checks that the batches agree bitwise before reporting
throughput.

Usage: python benchmarks/bench_walk.py [--samples N] [--players N]
"""

import argparse
import time

import numpy as np

from hodgeshap import pure_bargaining
from hodgeshap import _walk_py

try:
    from hodgeshap import _walk
except ImportError:
    _walk = None


def time_batch(kernel, values, n_players, target, samples, seed):
    out = np.empty(samples)
    start = time.perf_counter()
    status, bad, defect = kernel.walk_batch(
        values, n_players, 1, target, 0, seed, 0, samples, 10**7, out
    )
    elapsed = time.perf_counter() - start
    assert status == 0, f"step cap hit on sample {bad}"
    return elapsed, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--players", type=int, default=4)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    game = pure_bargaining(args.players)
    target = (1 << args.players) - 1

    print(f"walk to the grand coalition of {args.players} players, "
          f"{args.samples} samples, seed {args.seed}")

    py_time, py_out = time_batch(
        _walk_py, game.values, args.players, target, args.samples, args.seed
    )
    print(f"  python backend: {py_time:8.3f}s  ({args.samples / py_time:12.0f} paths/s)")

    if _walk is None:
        print("  compiled backend not built (pip install -e . rebuilds it)")
        return

    c_time, c_out = time_batch(
        _walk, game.values, args.players, target, args.samples, args.seed
    )
    print(f"  cython backend: {c_time:8.3f}s  ({args.samples / c_time:12.0f} paths/s)")
    print(f"  speedup: {py_time / c_time:.1f}x")
    if np.array_equal(py_out, c_out):
        print("  outputs bitwise identical across backends")
    else:
        raise SystemExit("backend outputs differ!")


if __name__ == "__main__":
    main()
