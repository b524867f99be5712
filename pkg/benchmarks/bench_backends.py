#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths (series segment summation, lower-triangular
convolution) on both backends and prints a small table.  Run:

    python benchmarks/bench_backends.py [--m 2000000] [--K 4096] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hypsum import _kernels_numpy
from hypsum.backend import HAS_NUMBA

if HAS_NUMBA:
    from hypsum import _kernels_numba


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=2_000_000,
                    help="series length for the segment-sum kernel")
    ap.add_argument("--K", type=int, default=4096,
                    help="table size for the convolution kernel")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    a = np.array([0.5, 0.5, 0.5])
    b = np.array([1.0, 1.5])
    ends = np.array([args.m // 4, args.m // 2, args.m], dtype=np.int64)
    rng = np.random.default_rng(0)
    w = rng.standard_normal(args.K + 1) / np.arange(1, args.K + 2)
    u = rng.standard_normal(args.K + 1) / np.arange(1, args.K + 2)

    rows = []
    seg_np = _time(lambda: _kernels_numpy.segment_sums(a, b, 1.0, ends), args.repeat)
    conv_np = _time(lambda: _kernels_numpy.convolve_lower(w, u), args.repeat)
    rows.append(("numpy", seg_np, conv_np))
    if HAS_NUMBA:
        _kernels_numba.segment_sums(a, b, 1.0, ends)   # compile
        _kernels_numba.convolve_lower(w, u)
        seg_nb = _time(lambda: _kernels_numba.segment_sums(a, b, 1.0, ends), args.repeat)
        conv_nb = _time(lambda: _kernels_numba.convolve_lower(w, u), args.repeat)
        rows.append(("numba", seg_nb, conv_nb))
        d1 = np.max(np.abs(_kernels_numba.segment_sums(a, b, 1.0, ends)
                           - _kernels_numpy.segment_sums(a, b, 1.0, ends)))
        d2 = np.max(np.abs(_kernels_numba.convolve_lower(w, u)
                           - _kernels_numpy.convolve_lower(w, u)))
    else:
        d1 = d2 = float("nan")

    print(f"segment_sums: m={args.m}   convolve_lower: K={args.K}   (best of {args.repeat})")
    print(f"{'backend':<8} {'segment_sums [s]':>18} {'convolve_lower [s]':>20}")
    for name, t_seg, t_conv in rows:
        print(f"{name:<8} {t_seg:>18.6f} {t_conv:>20.6f}")
    if HAS_NUMBA:
        print(f"max |numba - numpy|: segments {d1:.3e}, convolution {d2:.3e}")
    else:
        print("numba unavailable; numpy fallback only")


if __name__ == "__main__":
    main()
