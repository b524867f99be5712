"""Pure-numpy fallback implementations of the hot kernels."""

from __future__ import annotations

import numpy as np


def segment_sums(a: np.ndarray, b: np.ndarray, t0: float, ends: np.ndarray) -> np.ndarray:
    """Sums of series terms over [ends[i-1], ends[i]) for the gamma-ratio series.

    Terms follow term_{l+1} = term_l * prod(a_i+l) / (prod(b_j+l) (1+l)) from
    term_0 = t0.  Vectorized: one cumprod for the terms, pairwise np.sum per
    segment.
    """
    m_max = int(ends[-1])
    l = np.arange(m_max, dtype=np.float64)
    ratio = np.ones(m_max)
    for x in a:
        ratio *= x + l
    for x in b:
        ratio /= x + l
    ratio /= 1.0 + l
    terms = np.empty(m_max)
    terms[0] = t0
    if m_max > 1:
        np.cumprod(ratio[:-1], out=terms[1:])
        terms[1:] *= t0
    out = np.empty(len(ends))
    start = 0
    for i, e in enumerate(ends):
        out[i] = terms[start:int(e)].sum()
        start = int(e)
    return out


def convolve_lower(w: np.ndarray, u: np.ndarray) -> np.ndarray:
    """out[k] = sum_{j<=k} w[k-j] u[j], truncated to len(u)."""
    return np.convolve(w, u)[: len(u)]
