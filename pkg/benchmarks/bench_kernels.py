"""Benchmark the pure-Python and compiled row-reduction kernels.

Usage: python3 benchmarks/bench_kernels.py [--reps N]
"""

from __future__ import annotations

import argparse
import random
import time

from grassver.kernels import BACKENDS


def bench(fn, args_list, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        for args in args_list:
            fn(*args)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--reps", type=int, default=200)
    opts = parser.parse_args()

    rng = random.Random(12345)
    gf2_cases = [
        ([rng.getrandbits(20) for _ in range(8)],) for _ in range(200)
    ]
    gfp_cases = [
        ([tuple(rng.randrange(3) for _ in range(10)) for _ in range(6)], 3)
        for _ in range(200)
    ]

    workloads = [
        ("rref2 (GF(2), 8x20)", "rref2", gf2_cases),
        ("rank2 (GF(2), 8x20)", "rank2", gf2_cases),
        ("rrefp (GF(3), 6x10)", "rrefp", gfp_cases),
        ("rankp (GF(3), 6x10)", "rankp", gfp_cases),
    ]

    print(f"backends: {', '.join(BACKENDS)}  reps={opts.reps}")
    for title, fname, cases in workloads:
        times = {}
        for name, mod in BACKENDS.items():
            times[name] = bench(getattr(mod, fname), cases, opts.reps)
        line = "  ".join(f"{n}={t:.3f}s" for n, t in times.items())
        if "python" in times and "cython" in times and times["cython"] > 0:
            line += f"  speedup={times['python'] / times['cython']:.1f}x"
        print(f"{title:24s} {line}")


if __name__ == "__main__":
    main()
