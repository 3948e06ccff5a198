"""Compare the numba and pure-numpy float kernels.

    python3 benchmarks/bench_kernels.py [--degree 40] [--repeat 20]

The numba timings exclude the first (compiling) call.
"""

import argparse
import time

import numpy as np

from preserver_lab import _kernels


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--degree", type=int, default=40)
    ap.add_argument("--grid", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal(args.degree + 1)
    xs = np.linspace(-3, 3, args.grid)
    backends = [False] + ([True] if _kernels.HAVE_NUMBA else [])

    print(f"degree={args.degree} grid={args.grid} repeat={args.repeat}")
    print(f"{'kernel':<12}{'backend':<8}{'best (ms)':>12}")
    for use_numba in backends:
        name = "numba" if use_numba else "numpy"
        _kernels.aberth(coeffs, use_numba=use_numba)  # warm-up / compile
        _kernels.horner_grid(coeffs, xs, use_numba=use_numba)
        t_ab = _best(lambda: _kernels.aberth(coeffs, use_numba=use_numba), args.repeat)
        t_hg = _best(lambda: _kernels.horner_grid(coeffs, xs, use_numba=use_numba), args.repeat)
        print(f"{'aberth':<12}{name:<8}{t_ab * 1e3:>12.3f}")
        print(f"{'horner_grid':<12}{name:<8}{t_hg * 1e3:>12.3f}")
    if len(backends) == 2:
        a, _ = _kernels.aberth(coeffs, use_numba=True)
        b, _ = _kernels.aberth(coeffs, use_numba=False)
        gap = max(np.min(np.abs(b - z)) for z in a)
        print(f"max root mismatch between backends: {gap:.2e}")


if __name__ == "__main__":
    main()
