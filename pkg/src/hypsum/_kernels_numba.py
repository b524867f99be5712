"""Numba implementations of the hot kernels.

Importing this module requires numba; the backend module guards the import.
Kahan compensation is used in both kernels, so these are the accuracy
reference as well as the fast path.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def segment_sums(a, b, t0, ends):  # pragma: no cover - exercised via backend
    nseg = ends.shape[0]
    out = np.empty(nseg)
    term = t0
    l = 0
    for i in range(nseg):
        s = 0.0
        c = 0.0
        while l < ends[i]:
            y = term - c
            t = s + y
            c = (t - s) - y
            s = t
            r = 1.0
            for x in a:
                r *= x + l
            for x in b:
                r /= x + l
            term = term * r / (1.0 + l)
            l += 1
        out[i] = s
    return out


@njit(cache=True)
def convolve_lower(w, u):  # pragma: no cover - exercised via backend
    n = u.shape[0]
    out = np.zeros(n)
    for k in range(n):
        s = 0.0
        c = 0.0
        for j in range(k + 1):
            y = w[k - j] * u[j] - c
            t = s + y
            c = (t - s) - y
            s = t
        out[k] = s
    return out
