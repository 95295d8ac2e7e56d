"""Timing of the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--n 3] [--K 40] [--repeat 5]``.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from polybohr import kernels
from polybohr.extremal import ExtremalFunction, to_series
from polybohr.multiindex import index_table


def cases(n: int, K: int):
    table = index_table(n, K)
    f = to_series(ExtremalFunction(0.7, "minus", n), K, unit=True)
    rng = np.random.default_rng(0)
    z = 0.5 * rng.uniform(-1, 1, n) + 0.5j * rng.uniform(-1, 1, n)
    rho = np.abs(z)
    values = rng.standard_normal(len(table))
    return {
        "monomials": lambda: kernels.monomials(table.exps, z),
        "abs_monomials": lambda: kernels.abs_monomials(table.exps, rho),
        "block_sums": lambda: kernels.block_sums(values, table.offsets),
        "taylor_shift": lambda: kernels.taylor_shift(f.coeffs, table.exps, table.succ, z),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--K", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    timings = {}
    for name in backends:
        kernels.use_backend(name)
        for kernel, fn in cases(args.n, args.K).items():
            fn()
            number = 3 if kernel == "taylor_shift" else 50
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            timings[kernel, name] = best
    print(f"n={args.n} K={args.K} terms={len(index_table(args.n, args.K))}")
    print(f"{'kernel':>14}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for kernel in cases(1, 1):
        row = [timings[kernel, b] for b in backends]
        if "python" in backends and "compiled" in backends:
            speed = timings[kernel, "python"] / timings[kernel, "compiled"]
        else:
            speed = float("nan")
        print(f"{kernel:>14}" + "".join(f"{t * 1e3:>12.3f}ms" for t in row) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
