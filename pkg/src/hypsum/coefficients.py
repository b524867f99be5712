"""The expansion-weight family A_k for p >= 1: cached nested tables and
closed-form alternates.

The nested table is built from p-1 successive convolution layers (innermost
first), each O(K^2), instead of the naive O(K^p) multi-sum.  Values grow
factorially in k, so tables store signed-log entries; the layer internals run
on gamma-normalized plain doubles, which are polynomially bounded.

The closed-form alternates for p = 3, 4 contain terminating inner series with
binomial-scale cancellation (up to ~1e9 amplification at k = 20), hopeless in
floating point; since the parameters are IEEE doubles, i.e. exact rationals,
those forms are evaluated in exact rational arithmetic instead.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import backend
from .errors import DegenerateRepresentationError
from .params import SeriesParams
from .specfun import SignedLog, is_near_nonpositive_integer, ln_gamma_signed

__all__ = [
    "WeightTable",
    "weight_table",
    "weight_p3_closed",
    "weight_p4_closed",
    "nested_reference",
    "clear_cache",
]


@dataclass(frozen=True)
class WeightTable:
    """Signed-log values A_0..A_K for one parameter set.

    values[0] is exactly 1 for every p; for p = 1 all higher entries are
    exactly zero (the empty-table convention that collapses every coefficient
    sum to its k = 0 term).
    """

    params: SeriesParams
    K: int
    log_abs: np.ndarray
    sign: np.ndarray

    def value(self, k: int) -> SignedLog:
        return SignedLog(float(self.log_abs[k]), int(self.sign[k]))

    def float_value(self, k: int) -> float:
        return self.value(k).to_float()

    def floats(self, upto: int | None = None) -> np.ndarray:
        n = self.K + 1 if upto is None else upto + 1
        out = self.sign[:n].astype(np.float64)
        nz = out != 0.0
        out[nz] *= np.exp(self.log_abs[:n][nz])
        return out

    @property
    def values(self) -> list[SignedLog]:
        return [self.value(k) for k in range(self.K + 1)]


def _poch_prefix(x: float, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed-log arrays of (x)_k for k = 0..K, stable for every real x."""
    logs = np.zeros(K + 1)
    signs = np.zeros(K + 1, dtype=np.int8)
    signs[0] = 1
    if K == 0:
        return logs, signs
    if not is_near_nonpositive_integer(x):
        # (x)_k = Gamma(x+k)/Gamma(x); per-entry lgamma avoids cumulative drift
        gx = ln_gamma_signed(x)
        for k in range(1, K + 1):
            g = ln_gamma_signed(x + k)
            logs[k] = g.log_abs - gx.log_abs
            signs[k] = g.sign * gx.sign
        return logs, signs
    # x within pole tolerance of -q: the first q+1 factors are handled exactly,
    # afterwards x+k is safely positive and the lgamma route applies.
    q = max(0, -round(x))
    acc = 0.0
    sg = 1
    for k in range(1, min(q + 1, K) + 1):
        f = x + k - 1
        if f == 0.0 or sg == 0:
            sg = 0
        else:
            acc += math.log(abs(f))
            if f < 0.0:
                sg = -sg
        logs[k] = acc
        signs[k] = sg
    if K > q + 1 and sg != 0:
        base = ln_gamma_signed(x + q + 1)
        for k in range(q + 2, K + 1):
            g = ln_gamma_signed(x + k)
            logs[k] = acc + g.log_abs - base.log_abs
            signs[k] = sg * g.sign * base.sign
    return logs, signs


def _poch_over_factorial(x: float, K: int) -> np.ndarray:
    """(x)_d / d! as plain doubles (polynomially bounded in d)."""
    logs, signs = _poch_prefix(x, K)
    out = signs.astype(np.float64)
    for d in range(K + 1):
        if out[d] != 0.0:
            out[d] *= math.exp(logs[d] - math.lgamma(d + 1))
    return out


def _layer(prev_logs, prev_signs, B: float, c: float, K: int):
    """One convolution layer:

        new[k] = sum_{k2<=k} (B+k2)_{k-k2} (c)_{k-k2}/(k-k2)! prev[k2]

    Computed as a true convolution after dividing prev by Gamma(B+k2), which
    cancels the factorial growth; a non-positive-integer B splits off the
    finitely many outputs its Pochhammer zeros affect.
    """
    w = _poch_over_factorial(c, K)
    out_logs = np.zeros(K + 1)
    out_signs = np.zeros(K + 1, dtype=np.int8)
    if is_near_nonpositive_integer(B):
        q = max(0, -round(B))
        for k in range(min(q, K) + 1):
            tot = 0.0
            for k2 in range(k + 1):
                if prev_signs[k2] == 0:
                    continue
                pb = 1.0
                for i in range(k - k2):
                    pb *= B + k2 + i
                tot += pb * w[k - k2] * prev_signs[k2] * math.exp(prev_logs[k2])
            if tot != 0.0:
                out_logs[k] = math.log(abs(tot))
                out_signs[k] = 1 if tot > 0.0 else -1
        if K > q:
            n_u = K - q
            u = np.zeros(n_u)
            for i in range(n_u):
                k2 = q + 1 + i
                if prev_signs[k2] != 0:
                    g = ln_gamma_signed(B + k2)
                    u[i] = prev_signs[k2] * g.sign * math.exp(prev_logs[k2] - g.log_abs)
            conv = backend.convolve_lower(w, u)
            for k in range(q + 1, K + 1):
                cv = conv[k - q - 1]
                if cv != 0.0:
                    g = ln_gamma_signed(B + k)
                    out_logs[k] = g.log_abs + math.log(abs(cv))
                    out_signs[k] = g.sign * (1 if cv > 0.0 else -1)
        return out_logs, out_signs
    u = np.zeros(K + 1)
    for k2 in range(K + 1):
        if prev_signs[k2] != 0:
            g = ln_gamma_signed(B + k2)
            u[k2] = prev_signs[k2] * g.sign * math.exp(prev_logs[k2] - g.log_abs)
    conv = backend.convolve_lower(w, u)
    for k in range(K + 1):
        cv = conv[k]
        if cv != 0.0:
            g = ln_gamma_signed(B + k)
            out_logs[k] = g.log_abs + math.log(abs(cv))
            out_signs[k] = g.sign * (1 if cv > 0.0 else -1)
    return out_logs, out_signs


def _build(params: SeriesParams, K: int):
    a, b, p = params.a, params.b, params.p
    if p == 1:
        logs = np.zeros(K + 1)
        signs = np.zeros(K + 1, dtype=np.int8)
        signs[0] = 1
        return logs, signs

    def B(j: int) -> float:  # j is 1-based layer index
        return math.fsum(b[j:]) - math.fsum(a[j + 1:])

    # innermost layer j = p-1: T[k] = (B_{p-1})_k (b_{p-1} - a_{p+1})_k / k!
    j = p - 1
    lb, sb = _poch_prefix(B(j), K)
    lc, sc = _poch_prefix(b[j - 1] - a[j + 1], K)
    logs = lb + lc - np.array([math.lgamma(k + 1) for k in range(K + 1)])
    signs = (sb * sc).astype(np.int8)
    for j in range(p - 2, 0, -1):
        logs, signs = _layer(logs, signs, B(j), b[j - 1] - a[j + 1], K)
    # A_0 = 1 exactly for every p
    logs[0] = 0.0
    signs[0] = 1
    return logs, signs


def _build_exact(params: SeriesParams, K: int):
    """Same layered construction over exact rationals (parameters are IEEE
    doubles, hence rational).  Entries are correctly rounded on conversion;
    affordable for small K only (denominators grow with k)."""
    a = [Fraction(x) for x in params.a]
    b = [Fraction(x) for x in params.b]
    p = params.p

    def B(j: int) -> Fraction:
        return sum(b[j:], Fraction(0)) - sum(a[j + 1:], Fraction(0))

    j = p - 1
    Bj, cj = B(j), b[j - 1] - a[j + 1]
    cur = []
    pb = pc = Fraction(1)
    for k in range(K + 1):
        cur.append(pb * pc / math.factorial(k))
        pb *= Bj + k
        pc *= cj + k
    for j in range(p - 2, 0, -1):
        Bj, cj = B(j), b[j - 1] - a[j + 1]
        w = []
        pc = Fraction(1)
        for d in range(K + 1):
            w.append(pc / math.factorial(d))
            pc *= cj + d
        new = [Fraction(0)] * (K + 1)
        for k2 in range(K + 1):
            if cur[k2] == 0:
                continue
            pb = Fraction(1)
            for d in range(K + 1 - k2):
                new[k2 + d] += pb * w[d] * cur[k2]
                pb *= Bj + k2 + d
        cur = new
    logs = np.zeros(K + 1)
    signs = np.zeros(K + 1, dtype=np.int8)
    for k, f in enumerate(cur):
        sl = _signedlog_from_fraction(f)
        logs[k] = sl.log_abs
        signs[k] = sl.sign
    return logs, signs


# tables up to this K are built exactly; beyond it the double-precision
# convolution takes over (rational denominators grow too fast with k)
EXACT_K_LIMIT = 32

_cache: dict[tuple, WeightTable] = {}
_cache_lock = threading.Lock()


def weight_table(params: SeriesParams, K: int, use_cache: bool = True) -> WeightTable:
    """Table of A_0..A_K, cached per parameter set (largest K wins).

    Small tables (K <= EXACT_K_LIMIT, which covers every finite coefficient
    sum) are built in exact rational arithmetic and correctly rounded; larger
    tables use the double-precision convolution layers.  For p <= 4 the
    construction is certified against the printed closed forms; for p >= 5
    the convolution layering is a pattern extrapolation, verified against
    direct nested summation (internal consistency only).
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    key = (params.a, params.b)
    if use_cache:
        hit = _cache.get(key)
        if hit is not None and hit.K >= K:
            if hit.K == K:
                return hit
            return WeightTable(params, K, hit.log_abs[: K + 1], hit.sign[: K + 1])
    if K <= EXACT_K_LIMIT and params.p >= 2:
        logs, signs = _build_exact(params, K)
    else:
        logs, signs = _build(params, K)
    table = WeightTable(params, K, logs, signs)
    if use_cache:
        with _cache_lock:
            hit = _cache.get(key)
            if hit is None or hit.K < K:
                _cache[key] = table
    return table


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def nested_reference(params: SeriesParams, k: int) -> float:
    """Direct nested multi-sum in plain doubles; reference for small k only."""
    a, b, p = params.a, params.b, params.p
    if p == 1:
        return 1.0 if k == 0 else 0.0

    def B(j: int) -> float:
        return math.fsum(b[j:]) - math.fsum(a[j + 1:])

    def rec(j: int, kj: int) -> float:
        if j == p - 1:
            r = 1.0
            for i in range(kj):
                r *= (B(j) + i) * (b[j - 1] - a[j + 1] + i)
            return r / math.factorial(kj)
        tot = 0.0
        for kn in range(kj + 1):
            d = kj - kn
            r = 1.0
            for i in range(d):
                r *= (B(j) + kn + i) * (b[j - 1] - a[j + 1] + i)
            tot += r / math.factorial(d) * rec(j + 1, kn)
        return tot

    return rec(1, k)


# ---------------------------------------------------------------------------
# closed-form alternates, exact rational arithmetic
# ---------------------------------------------------------------------------


def _fpoch(x: Fraction, n: int) -> Fraction:
    r = Fraction(1)
    for i in range(n):
        r *= x + i
    return r


def _f32_terminating(p1: Fraction, p2: Fraction, nk: int, q1: Fraction, q2: Fraction) -> Fraction:
    """3F2(p1, p2, -nk; q1, q2 | 1) as an exact finite sum of nk+1 terms."""
    tot = Fraction(0)
    term = Fraction(1)
    for l in range(nk + 1):
        tot += term
        if l < nk:
            den = (q1 + l) * (q2 + l) * (1 + l)
            if den == 0:
                raise DegenerateRepresentationError(
                    "vanishing denominator Pochhammer in terminating 3F2"
                )
            term = term * (p1 + l) * (p2 + l) * (-nk + l) / den
    return tot


def _signedlog_from_fraction(f: Fraction) -> SignedLog:
    if f == 0:
        return SignedLog(0.0, 0)
    sign = 1 if f > 0 else -1
    num, den = abs(f.numerator), f.denominator
    # rescale so the mantissa sits in [1/2, 2); exact for any integer sizes
    shift = num.bit_length() - den.bit_length()
    mant = Fraction(num, den << shift) if shift >= 0 else Fraction(num << -shift, den)
    return SignedLog(shift * math.log(2.0) + math.log(float(mant)), sign)


@lru_cache(maxsize=None)
def _inner32_p4(key: tuple, l: int, variant: str) -> Fraction:
    a = [Fraction(x) for x in key[0]]
    b = [Fraction(x) for x in key[1]]
    if variant == "first":
        Y = b[3] + b[2] - a[4] - a[3]
        return _f32_terminating(b[3] - a[4], b[2] - a[4], l, Y, 1 + a[3] - b[1] - l)
    Y1 = b[2] + b[3] - a[2] - a[4]
    Y2 = b[2] + b[3] - a[3] - a[4]
    return _f32_terminating(b[2] - a[4], b[3] - a[4], l, Y1, Y2)


def _check_variant(variant: str) -> None:
    if variant not in ("first", "second"):
        raise ValueError(f"variant must be 'first' or 'second', got {variant!r}")


def weight_p3_closed(params: SeriesParams, k: int, variant: str = "first") -> SignedLog:
    """A_k for p = 3 from one of the two closed 3F2 representations (exact).

    Raises DegenerateRepresentationError when the representation's denominator
    Pochhammers vanish; the nested table stays authoritative there.
    """
    _check_variant(variant)
    if params.p != 3:
        raise ValueError("weight_p3_closed requires p = 3")
    a = [Fraction(x) for x in params.a]
    b = [Fraction(x) for x in params.b]
    if variant == "first":
        X = b[2] + b[1] - a[3] - a[2]
        pref = _fpoch(X, k) * _fpoch(b[0] - a[2], k)
        f = _f32_terminating(b[2] - a[3], b[1] - a[3], k, X, 1 + a[2] - b[0] - k)
    else:
        X1 = b[0] + b[2] - a[2] - a[3]
        X2 = b[1] + b[2] - a[2] - a[3]
        pref = _fpoch(X1, k) * _fpoch(X2, k)
        f = _f32_terminating(b[2] - a[2], b[2] - a[3], k, X1, X2)
    return _signedlog_from_fraction(pref * f / math.factorial(k))


def weight_p4_closed(params: SeriesParams, k: int, variant: str = "first") -> SignedLog:
    """A_k for p = 4 from one of the two closed double-sum representations (exact)."""
    _check_variant(variant)
    if params.p != 4:
        raise ValueError("weight_p4_closed requires p = 4")
    a = [Fraction(x) for x in params.a]
    b = [Fraction(x) for x in params.b]
    key = (params.a, params.b)
    if variant == "first":
        X = b[3] + b[2] + b[1] - a[4] - a[3] - a[2]
        pref = _fpoch(X, k) * _fpoch(b[0] - a[2], k)
        Y = b[3] + b[2] - a[4] - a[3]
        tot = Fraction(0)
        term = Fraction(1)
        for l in range(k + 1):
            tot += term * _inner32_p4(key, l, "first")
            if l < k:
                den = (X + l) * (1 + a[2] - b[0] - k + l) * (1 + l)
                if den == 0:
                    raise DegenerateRepresentationError(
                        "vanishing denominator Pochhammer in the outer sum"
                    )
                term = term * (Y + l) * (b[1] - a[3] + l) * (-k + l) / den
    else:
        X1 = b[0] + b[2] + b[3] - a[2] - a[3] - a[4]
        X2 = b[1] + b[2] + b[3] - a[2] - a[3] - a[4]
        pref = _fpoch(X1, k) * _fpoch(X2, k)
        Y1 = b[2] + b[3] - a[2] - a[4]
        Y2 = b[2] + b[3] - a[3] - a[4]
        tot = Fraction(0)
        term = Fraction(1)
        for l in range(k + 1):
            tot += term * _inner32_p4(key, l, "second")
            if l < k:
                den = (X1 + l) * (X2 + l) * (1 + l)
                if den == 0:
                    raise DegenerateRepresentationError(
                        "vanishing denominator Pochhammer in the outer sum"
                    )
                term = term * (Y1 + l) * (Y2 + l) * (-k + l) / den
    return _signedlog_from_fraction(pref * tot / math.factorial(k))
