#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot kernels (trajectory stepping and matrix-ring table
construction) under RINGWALK_BACKEND=numba and =numpy on identical inputs,
checks the outputs agree bit-for-bit, and prints a timing table.

    python3 benchmarks/bench_backends.py [--samples 200000] [--steps 50]
"""

import argparse
import os
import time
from fractions import Fraction

import numpy as np


def time_call(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_run_chain(samples, steps):
    from ringwalk.chain import ClassDistribution
    from ringwalk.mixing import simulate
    from ringwalk.rings import matrix_ring

    ring = matrix_ring(3)
    Q = ClassDistribution.uniform(ring)
    alpha = Fraction(1, 2)

    results = {}
    times = {}
    for backend in ("numba", "numpy"):
        os.environ["RINGWALK_BACKEND"] = backend
        # warm-up compiles the jitted kernel outside the timing
        simulate(ring, Q, alpha, 0, 2, 1000, seed=1)
        dt, res = time_call(
            lambda: simulate(ring, Q, alpha, 0, steps, samples, seed=7))
        results[backend] = res.counts
        times[backend] = dt
    assert np.array_equal(results["numba"], results["numpy"]), \
        "backends must produce identical counts"
    return times


def bench_kernel_only(samples, steps):
    """Time run_chain on pre-drawn moves, isolating the stepping kernel."""
    from ringwalk import _kernels
    from ringwalk.rings import matrix_ring

    ring = matrix_ring(3)
    rng = np.random.Generator(np.random.Philox(key=[11, 0]))
    coins = (rng.integers(0, 2, size=(steps, samples))).astype(np.int8)
    adds = rng.integers(0, ring.n, size=(steps, samples), dtype=np.int32)
    zs = rng.integers(0, ring.n, size=(steps, samples), dtype=np.int32)

    times = {}
    finals = {}
    for backend in ("numba", "numpy"):
        os.environ["RINGWALK_BACKEND"] = backend
        states = np.zeros(samples, dtype=np.int32)
        _kernels.run_chain(states[:100].copy(), coins[:, :100], adds[:, :100],
                           zs[:, :100], ring.add, ring.mul)  # warm-up
        def run():
            s = np.zeros(samples, dtype=np.int32)
            _kernels.run_chain(s, coins, adds, zs, ring.add, ring.mul)
            return s
        times[backend], finals[backend] = time_call(run)
    assert np.array_equal(finals["numba"], finals["numpy"])
    return times


def bench_mul_table(q):
    from ringwalk.rings import matrix_ring

    times = {}
    tables = {}
    for backend in ("numba", "numpy"):
        os.environ["RINGWALK_BACKEND"] = backend
        if backend == "numba":
            matrix_ring(2)  # warm-up compile
        dt, ring = time_call(lambda: matrix_ring(q), repeat=2)
        times[backend] = dt
        tables[backend] = ring.mul
    assert np.array_equal(tables["numba"], tables["numpy"])
    return times


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--q", type=int, default=5,
                        help="field size for the table-construction bench")
    args = parser.parse_args()

    try:
        import numba  # noqa: F401
    except ImportError:
        print("numba is not installed; nothing to compare")
        return

    print(f"trajectory stepping: {args.samples} samples x {args.steps} steps "
          f"on M2(F3)")
    times = bench_run_chain(args.samples, args.steps)
    for backend in ("numpy", "numba"):
        rate = args.samples * args.steps / times[backend] / 1e6
        print(f"  {backend:6s} {times[backend]*1e3:9.1f} ms   "
              f"{rate:7.1f} M steps/s")
    print(f"  speedup numba/numpy: {times['numpy']/times['numba']:.2f}x")

    print(f"stepping kernel only (pre-drawn moves), same workload")
    times = bench_kernel_only(args.samples, args.steps)
    for backend in ("numpy", "numba"):
        rate = args.samples * args.steps / times[backend] / 1e6
        print(f"  {backend:6s} {times[backend]*1e3:9.1f} ms   "
              f"{rate:7.1f} M steps/s")
    print(f"  speedup numba/numpy: {times['numpy']/times['numba']:.2f}x")

    print(f"multiplication table of M2(F{args.q}) "
          f"({args.q ** 4} x {args.q ** 4})")
    times = bench_mul_table(args.q)
    for backend in ("numpy", "numba"):
        print(f"  {backend:6s} {times[backend]*1e3:9.1f} ms")
    print(f"  speedup numba/numpy: {times['numpy']/times['numba']:.2f}x")
    os.environ.pop("RINGWALK_BACKEND", None)


if __name__ == "__main__":
    main()
