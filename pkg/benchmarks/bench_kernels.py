#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure numpy fallback.

Times the two hot paths (the Beta-product log-CDF behind the exact radius
law, and the batched incomplete gamma behind the tail-sum diagnostics) on
every importable backend and prints a comparison table.

Usage:  python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import math
import sys
import time

import numpy as np

from cuetrunc._backend import available_backends


def time_call(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="small sizes (used by the test suite)")
    args = parser.parse_args(argv)

    backends = available_backends()
    repeats = 3 if args.quick else 7

    if args.quick:
        logcdf_cases = [(0.97, 460, 40), (0.9988, 2000, 108)]
        gamma_sizes = [10_000]
    else:
        logcdf_cases = [(0.97, 460, 40), (0.9988, 31892, 108),
                        (1.0 - 1.2e-7, 999995, 5)]
        gamma_sizes = [100_000, 1_000_000]

    print(f"backends: {', '.join(backends)}")
    print()
    print("kernel: beta_factor_logcdf(r, p, k)   [seconds, best of "
          f"{repeats}]")
    header = f"{'case':>28}" + "".join(f"{name:>12}" for name in backends)
    print(header)
    for r, p, k in logcdf_cases:
        row = f"p={p:>7} k={k:>4} r={r:<10.6g}"[:28].rjust(28)
        values = {}
        for name, mod in backends.items():
            values[name] = time_call(lambda m=mod: m.beta_factor_logcdf(r, p, k),
                                     repeats)
            row += f"{values[name]:>12.6f}"
        if len(values) == 2:
            pure_t, comp_t = values.get("pure"), values.get("compiled")
            if pure_t and comp_t:
                row += f"   ({pure_t / comp_t:.1f}x)"
        print(row)

    print()
    print(f"kernel: gammainc_p_many(k, z)   [seconds, best of {repeats}]")
    print(header)
    for size in gamma_sizes:
        z = np.linspace(1.0, 190.0, size)
        row = f"len(z)={size:<12}".rjust(28)
        values = {}
        for name, mod in backends.items():
            values[name] = time_call(lambda m=mod: m.gammainc_p_many(191.0, z),
                                     repeats)
            row += f"{values[name]:>12.6f}"
        if len(values) == 2 and values.get("compiled"):
            row += f"   ({values['pure'] / values['compiled']:.1f}x)"
        print(row)

    agree = []
    for r, p, k in logcdf_cases:
        vals = [mod.beta_factor_logcdf(r, p, k) for mod in backends.values()]
        agree.append(max(abs(v - vals[0]) for v in vals))
    print()
    print(f"cross-backend agreement (max abs log-CDF gap): {max(agree):.3g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
