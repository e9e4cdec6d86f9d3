"""Time the increment Fourier coefficients three ways.

    python benchmarks/bench_nufft.py --n 960 --K 14399

``naive`` is the O(nK) sum of exponentials, ``direct`` the exact
GEMM-factorised sum used as the reference path, ``fast`` the type-1 NUFFT.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fourier_epps.data import TWO_PI, TickSeries
from fourier_epps.fourier import price_coeffs


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[960, 5000, 28800])
    ap.add_argument("--K", type=int, default=14399)
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    k = np.arange(-args.K, args.K + 1)
    print(f"{'n':>6} {'naive s':>9} {'direct s':>9} {'fast s':>9} {'naive/fast':>10} {'direct/fast':>11} {'max err':>9}")
    for n in args.n:
        times = np.sort(rng.uniform(0, TWO_PI, n))
        s = TickSeries(times, np.cumsum(rng.normal(0, 0.01, n)), TWO_PI)
        price_coeffs(s, args.K, "fast", args.tol)  # warm the window cache
        t_fast, fast = best_of(lambda: price_coeffs(s, args.K, "fast", args.tol), args.repeat)
        t_direct, direct = best_of(lambda: price_coeffs(s, args.K, "direct"), args.repeat)
        if n * k.size <= 5e7:
            t_naive, _ = best_of(lambda: np.exp(-1j * np.outer(k, s.times[:-1])) @ s.increments, 1)
        else:
            t_naive = float("nan")  # the dense exponential matrix would not fit comfortably in memory
        err = np.abs(fast.values - direct.values).max()
        print(f"{n:>6} {t_naive:>9.4f} {t_direct:>9.4f} {t_fast:>9.4f} {t_naive / t_fast:>10.1f} "
              f"{t_direct / t_fast:>11.1f} {err:>9.1e}")


if __name__ == "__main__":
    main()
