"""Kernel backend selection.

The hot numeric loops (series segment summation, convolution layers) exist in
two implementations: numba-jitted loops and a pure-numpy fallback.  The env
variable HYPSUM_BACKEND selects one explicitly ("numba" or "numpy"); when it
is unset, numba is used if importable.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_numpy

_ENV_VAR = "HYPSUM_BACKEND"

try:
    from . import _kernels_numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    _kernels_numba = None
    HAS_NUMBA = False


def _select() -> str:
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if not HAS_NUMBA:
            raise RuntimeError(f"{_ENV_VAR}=numba but numba is not importable")
        return "numba"
    raise RuntimeError(f"unrecognized {_ENV_VAR}={env!r}; use 'numba' or 'numpy'")


_ACTIVE = _select()


def active_backend() -> str:
    return _ACTIVE


def _impl():
    return _kernels_numba if _ACTIVE == "numba" else _kernels_numpy


def segment_sums(a, b, t0: float, ends) -> np.ndarray:
    """Per-segment Kahan/pairwise sums of the series terms, one pass to ends[-1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ends = np.asarray(ends, dtype=np.int64)
    if ends.size == 0:
        return np.empty(0)
    if ends[0] < 1 or np.any(np.diff(ends) <= 0):
        raise ValueError("checkpoints must be positive and strictly increasing")
    return _impl().segment_sums(a, b, float(t0), ends)


def convolve_lower(w, u) -> np.ndarray:
    """Truncated lower-triangular convolution used by the coefficient layers."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    return _impl().convolve_lower(w, u)
