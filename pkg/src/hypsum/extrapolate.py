"""Sequence extrapolation utilities: Aitken delta-squared and Richardson with
known exponents on a geometric grid."""

from __future__ import annotations

import numpy as np

__all__ = ["aitken", "iterated_aitken", "richardson"]


def aitken(seq) -> np.ndarray:
    """One Aitken delta-squared sweep; output is two entries shorter."""
    s = np.asarray(seq, dtype=np.float64)
    if s.size < 3:
        return s.copy()
    d1 = s[1:-1] - s[:-2]
    d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
    out = s[:-2].copy()
    ok = d2 != 0.0
    out[ok] = s[:-2][ok] - d1[ok] ** 2 / d2[ok]
    return out


def iterated_aitken(seq, sweeps: int | None = None) -> float:
    """Repeated Aitken sweeps; returns the last entry of the final sweep."""
    s = np.asarray(seq, dtype=np.float64)
    n = (s.size - 1) // 2 if sweeps is None else sweeps
    for _ in range(n):
        if s.size < 3:
            break
        s = aitken(s)
    return float(s[-1])


def richardson(values, exponents, ratio: float = 2.0) -> tuple[float, float]:
    """Eliminate known error exponents from values on a geometric grid.

    values[j] ~ L + sum_i c_i * x_j^(-theta_i) with x_{j+1} = ratio * x_j.
    Returns (estimate, stability) where stability is the change produced by
    the final elimination stage - an optimistic error indicator that callers
    should widen with their own noise floors.
    """
    cur = np.asarray(values, dtype=np.float64)
    if cur.size < 2:
        return float(cur[-1]), np.inf
    prev_last = cur[-1]
    for th in exponents:
        if cur.size < 2:
            break
        f = ratio ** th
        prev_last = cur[-1]
        cur = (f * cur[1:] - cur[:-1]) / (f - 1.0)
    return float(cur[-1]), abs(float(cur[-1]) - float(prev_last))
