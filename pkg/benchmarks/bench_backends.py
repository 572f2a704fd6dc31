#!/usr/bin/env python3
"""Benchmark the compiled Jacobi kernel against the pure Python fallback.

Also asserts that both kernels produce bit-identical eigensystems on the
benchmarked matrices (they implement the same arithmetic).

Usage: python benchmarks/bench_backends.py [--sizes 16,32,64,128,256] [--repeats 3]
"""

import argparse
import time

import numpy as np

from gapmm import _jacobi_py
from gapmm.backend import jacobi_eigh

try:
    from gapmm import _jacobi

    COMPILED = _jacobi.jacobi_kernel
except ImportError:
    COMPILED = None


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="16,32,64,128,256")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    if COMPILED is None:
        print("compiled kernel unavailable; timing the Python kernel only")
    print(f"{'n':>6} {'compiled [s]':>14} {'python [s]':>14} {'speedup':>9}")
    for n in sizes:
        m = rng.standard_normal((n, n))
        m = 0.5 * (m + m.T)
        t_py = best_time(lambda: jacobi_eigh(m, kernel=_jacobi_py.jacobi_kernel), args.repeats)
        if COMPILED is not None:
            t_c = best_time(lambda: jacobi_eigh(m, kernel=COMPILED), args.repeats)
            w_c, q_c, s_c = jacobi_eigh(m, kernel=COMPILED)
            w_p, q_p, s_p = jacobi_eigh(m, kernel=_jacobi_py.jacobi_kernel)
            assert np.array_equal(w_c, w_p) and np.array_equal(q_c, q_p) and s_c == s_p, (
                f"backends disagree at n={n}"
            )
            print(f"{n:>6} {t_c:>14.6f} {t_py:>14.6f} {t_py / t_c:>9.1f}x")
        else:
            print(f"{n:>6} {'-':>14} {t_py:>14.6f} {'-':>9}")
    if COMPILED is not None:
        print("bit-identity between backends verified on all benchmarked sizes")


if __name__ == "__main__":
    main()
