"""Low-level partial-sum engine for the gamma-ratio series.

Terms are t_l = prod Gamma(a_i+l) / (prod Gamma(b_j+l) Gamma(1+l)); they are
generated by the term ratio recurrence from a signed-log t_0 and accumulated
with compensated summation in the selected kernel backend.
"""

from __future__ import annotations

import math

import numpy as np

from . import backend
from .params import SeriesParams
from .specfun import SignedLog, gamma_ratio

__all__ = ["leading_term", "partial_sum", "partial_sums_at", "segment_sums_at"]


def leading_term(params: SeriesParams) -> SignedLog:
    """The l = 0 term: prod Gamma(a_i) / prod Gamma(b_j)."""
    return gamma_ratio(list(params.a), list(params.b))


def segment_sums_at(params: SeriesParams, ms) -> np.ndarray:
    """Fresh compensated sums over [0, m_0), [m_0, m_1), ... for sorted ms.

    Segment sums (rather than differences of partial sums) keep the relative
    error of each segment at machine level, which the residual-order
    measurement relies on.
    """
    ms = np.asarray(ms, dtype=np.int64)
    t0 = leading_term(params).to_float()
    return backend.segment_sums(params.a, params.b, t0, ms)


def partial_sums_at(params: SeriesParams, ms) -> np.ndarray:
    """Partial sums at each checkpoint in sorted ms (single pass)."""
    segments = segment_sums_at(params, ms)
    out = np.empty_like(segments)
    acc: list[float] = []
    for i, seg in enumerate(segments):
        acc.append(float(seg))
        out[i] = math.fsum(acc)
    return out


def partial_sum(params: SeriesParams, m: int) -> float:
    if m < 1:
        raise ValueError("m must be a positive integer")
    return float(partial_sums_at(params, [m])[0])
