#!/usr/bin/env python3
"""Benchmark: compiled extension vs pure-Python kernels on the hot paths.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from henonlab import PLUS, scenes
from henonlab._kernels import pure
from henonlab.green import packed_for

try:
    from henonlab._kernels import _fast
except ImportError:
    _fast = None


def _points(n, seed, half=2.5):
    rng = np.random.default_rng(seed)
    v = rng.uniform(-half, half, (n, 4))
    return [(complex(r[0], r[1]), complex(r[2], r[3])) for r in v]


def bench(label, fn, reps=1):
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    n_pts = 100 if args.quick else 400
    n_rows = 32 if args.quick else 96

    gs = scenes.two_gen().gs
    pk = packed_for(gs, PLUS)
    pts = _points(n_pts, 1)
    row = _points(n_rows, 2)
    zx = np.array([p[0] for p in row], dtype=np.complex128)
    zy = np.array([p[1] for p in row], dtype=np.complex128)
    idx = np.random.default_rng(3).integers(0, 2, 64).astype(np.int64)

    def estimates(impl):
        def run():
            for x, y in pts:
                impl.green_estimate_point(pk, x, y, 12, 28, 2**18)
        return run

    def rows(impl):
        lo = np.empty(n_rows)
        hi = np.empty(n_rows)
        lv = np.empty(n_rows, dtype=np.int64)
        fl = np.empty(n_rows, dtype=np.int8)

        def run():
            for _ in range(8):
                impl.green_estimate_rows(pk, zx, zy, 12, 28, 2**18, lo, hi, lv, fl)
        return run

    def classify(impl):
        def run():
            for x, y in pts:
                impl.classify_point_kernel(pk, x, y, 10, 2**16)
        return run

    def orbits(impl):
        def run():
            for x, y in pts:
                impl.na_orbit(pk, idx, x, y)
        return run

    def levels(impl):
        def run():
            for x, y in pts[: n_pts // 4]:
                impl.green_levels_point(pk, x, y, 10)
        return run

    cases = [
        ("green_estimate_point", estimates),
        ("green_estimate_rows", rows),
        ("classify_point", classify),
        ("na_orbit", orbits),
        ("green_levels (k<=10)", levels),
    ]

    print(f"{'kernel':<24}{'pure [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, make in cases:
        t_pure = bench(name, make(pure))
        if _fast is None:
            print(f"{name:<24}{t_pure:>12.4f}{'n/a':>14}{'-':>10}")
            continue
        t_fast = bench(name, make(_fast))
        print(f"{name:<24}{t_pure:>12.4f}{t_fast:>14.4f}{t_pure / t_fast:>9.1f}x")
    if _fast is None:
        print("\ncompiled extension not built; install with `pip install -e .`")


if __name__ == "__main__":
    main()
