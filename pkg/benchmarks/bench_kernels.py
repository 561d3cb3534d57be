#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the three hot kernels on realistic inputs (closure of seeds under
a multiplication table, packed subset / disjointness matrices) plus an
end-to-end subgroup enumeration per backend.  The backend of the
enumeration run is switched with JOINLAT_BACKEND in a subprocess so the
module-level dispatch stays honest.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from joinlat import build
from joinlat.kernels import _IMPLS, pack_rows


def time_call(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_closure(repeat: int):
    g = build("Sym(5)")
    rng = np.random.default_rng(0)
    seeds = [rng.integers(0, g.order, size=2).astype(np.int64) for _ in range(400)]
    stop = g.largest_proper_divisor()
    rows = {}
    for name, impl in _IMPLS.items():
        fn = impl["closure"]
        fn(g.mul_table, seeds[0], stop)  # warm JIT
        rows[name] = time_call(
            lambda: [fn(g.mul_table, s, stop) for s in seeds], repeat=repeat
        )
    return "closure x400 (Sym(5))", rows


def bench_subset(repeat: int):
    rng = np.random.default_rng(1)
    packed = pack_rows(rng.random((2500, 192)) < 0.3)
    rows = {}
    for name, impl in _IMPLS.items():
        fn = impl["subset_matrix"]
        fn(packed[:4], packed[:4])
        rows[name] = time_call(fn, packed, packed, repeat=repeat)
    return "subset_matrix 2500x2500", rows


def bench_disjoint(repeat: int):
    rng = np.random.default_rng(2)
    packed = pack_rows(rng.random((2500, 64)) < 0.1)
    rows = {}
    for name, impl in _IMPLS.items():
        fn = impl["disjoint_matrix"]
        fn(packed[:4], packed[:4])
        rows[name] = time_call(fn, packed, packed, repeat=repeat)
    return "disjoint_matrix 2500x2500", rows


def bench_enumeration() -> tuple[str, dict]:
    script = (
        "import time, joinlat\n"
        "from joinlat import kernels\n"
        "kernels.warm_up()\n"
        "t0 = time.perf_counter()\n"
        "for spec in ['ElemAbelian(2,6)', 'Sym(5)', 'Alt(6)']:\n"
        "    joinlat.enumerate_subgroups(joinlat.build(spec))\n"
        "print(time.perf_counter() - t0)\n"
    )
    rows = {}
    for name in _IMPLS:
        env = dict(os.environ, JOINLAT_BACKEND=name)
        out = subprocess.run(
            [sys.executable, "-c", script], capture_output=True, text=True, env=env
        )
        rows[name] = float(out.stdout.strip())
    return "enumerate C2^6 + Sym(5) + Alt(6)", rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    results = [
        bench_closure(args.repeat),
        bench_subset(args.repeat),
        bench_disjoint(args.repeat),
        bench_enumeration(),
    ]
    width = max(len(name) for name, _ in results)
    print(f"{'benchmark':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name, rows in results:
        ratio = rows["numpy"] / rows["numba"] if rows["numba"] else float("inf")
        print(
            f"{name:<{width}}  {rows['numba']:>9.4f}s  {rows['numpy']:>9.4f}s  {ratio:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
