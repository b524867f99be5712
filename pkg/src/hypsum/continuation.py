"""Continuation-formula coefficients around unit argument.

Finite coefficient families (singular, logarithmic, growing) are direct
formula transcriptions over the cached weight tables.  The infinite-sum
constants are resolved in two stages: the literal truncation protocol, which
succeeds whenever the weighted tail terminates (p = 1 convention, vanishing
Pochhammer collapses), and otherwise - the tails decay only algebraically, so
no direct summation can reach tolerance - an extraction that reads the
constant off the series' own partial sums after removing the known correction
terms, Richardson-extrapolated on the known remainder ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import weight_table, _poch_prefix
from .errors import ConvergenceError, DomainError, PoleError, TailError
from .extrapolate import richardson
from .params import DEFAULT_EPS_INT, SeriesParams, SpTag, classify
from .series import partial_sums_at
from .specfun import (EULER_GAMMA, digamma, gamma_ratio,
                      is_near_nonpositive_integer, lgamma_ratio, ln_gamma_signed)

__all__ = [
    "TailControl",
    "SumResult",
    "limit_constant",
    "limit_constant_detail",
    "singular_coefficient",
    "log_coefficient_balanced",
    "constant_balanced",
    "constant_balanced_detail",
    "log_coefficient_positive",
    "constant_positive",
    "constant_positive_detail",
    "growing_coefficient",
    "log_coefficient_negative",
    "constant_negative",
    "constant_negative_detail",
]

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class TailControl:
    """Knobs for resolving the infinite coefficient sums.

    rel_tol and k_max drive the literal truncation protocol; accelerate
    enables the partial-sum extraction fallback for the algebraically
    decaying tails that plain truncation can never finish.
    """

    rel_tol: float = 1e-14
    k_max: int = 200_000
    min_decay_window: int = 8
    accelerate: bool = True

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.min_decay_window < 1:
            raise ValueError("min_decay_window must be at least 1")


DEFAULT_CONTROL = TailControl()


@dataclass(frozen=True)
class SumResult:
    """A resolved constant with its reported error bound."""

    value: float
    error_bound: float
    terms_used: int
    method: str


# ---------------------------------------------------------------------------
# finite inner sums
# ---------------------------------------------------------------------------


def _inner_sum(params: SeriesParams, x: float, y: float, n: int,
               upper: int | None = None, shift: int = 0,
               psi_weight: int | None = None) -> float:
    """sum_{k=0}^{U} (-n)_k / ((x)_k (y)_k) * A_{k+shift} [* psi(1+w-k) weight].

    U defaults to n (the sum terminates there since (-n)_k vanishes beyond).
    """
    U = n if upper is None else upper
    table = weight_table(params, U + shift)
    ak = table.floats()
    tot = []
    w = 1.0
    for k in range(U + 1):
        term = w * ak[k + shift]
        if psi_weight is not None:
            term *= digamma(1.0 + psi_weight - k)
        tot.append(term)
        if k < U:
            den = (x + k) * (y + k)
            if den == 0.0:
                raise PoleError(
                    f"inner-sum denominator Pochhammer vanished at k={k + 1}"
                )
            w *= (-n + k) / den
    return math.fsum(tot)


def _poch(x: float, n: int) -> float:
    r = 1.0
    for i in range(n):
        r *= x + i
    return r


# ---------------------------------------------------------------------------
# finite coefficient families
# ---------------------------------------------------------------------------


def singular_coefficient(params: SeriesParams, n: int) -> float:
    """Coefficient of the n-th branch-point term in the unit-argument expansion."""
    s = params.s
    if n < 0:
        raise DomainError("n must be non-negative")
    if abs(s - round(s)) <= DEFAULT_EPS_INT:
        raise PoleError("singular coefficients need a non-integer exponent")
    a1, a2 = params.a[0], params.a[1]
    g = ln_gamma_signed(-s - n)
    pref = ((-1) ** n * _poch(a1 + s, n) * _poch(a2 + s, n) / math.factorial(n)
            * g.sign * math.exp(g.log_abs))
    return pref * _inner_sum(params, a1 + s, a2 + s, n)


def log_coefficient_balanced(params: SeriesParams, n: int) -> float:
    """n-th coefficient of the logarithmic series in the zero-balanced case."""
    _require_tag(params, SpTag.ZERO, "balanced log coefficient")
    a1, a2 = params.a[0], params.a[1]
    pref = -_poch(a1, n) * _poch(a2, n) / math.factorial(n) ** 2
    return pref * _inner_sum(params, a1, a2, n)


def log_coefficient_positive(params: SeriesParams, t: int, n: int) -> float:
    """n-th logarithmic coefficient when the exponent equals t >= 1."""
    _require_tag(params, SpTag.POSITIVE_INTEGER, "positive-case log coefficient", t)
    a1, a2 = params.a[0], params.a[1]
    pref = -((-1) ** t) * _poch(a1 + t, n) * _poch(a2 + t, n) / math.gamma(1 + t + n)
    return pref * _inner_sum(params, a1 + t, a2 + t, n)


def growing_coefficient(params: SeriesParams, t: int, n: int) -> float:
    """Coefficient h_n of the growing singular block, 0 <= n <= t-1."""
    _require_tag(params, SpTag.NEGATIVE_INTEGER, "growing coefficient", t)
    if not (0 <= n <= t - 1):
        raise DomainError(f"growing coefficient needs 0 <= n <= t-1, got n={n}")
    a1, a2 = params.a[0], params.a[1]
    pref = ((-1) ** n * _poch(a1 - t, n) * _poch(a2 - t, n)
            * math.gamma(t - n) / math.factorial(n))
    return pref * _inner_sum(params, a1 - t, a2 - t, n)


def log_coefficient_negative(params: SeriesParams, t: int, n: int) -> float:
    """n-th logarithmic coefficient when the exponent equals -t."""
    _require_tag(params, SpTag.NEGATIVE_INTEGER, "negative-case log coefficient", t)
    a1, a2 = params.a[0], params.a[1]
    pref = (-((-1) ** t) * _poch(a1 - t, t + n) * _poch(a2 - t, t + n)
            / (math.factorial(n) * math.gamma(1 + t + n)))
    return pref * _inner_sum(params, a1 - t, a2 - t, t + n)


def _require_tag(params: SeriesParams, tag: SpTag, what: str, t: int | None = None) -> None:
    cls = classify(params.s)
    if cls.tag is not tag or (t is not None and cls.t != t):
        raise DomainError(
            f"{what} requires exponent class {tag.value}"
            + (f" with t={t}" if t is not None else "")
            + f", but s={params.s!r} classifies as {cls.tag.value} (t={cls.t})"
        )


# ---------------------------------------------------------------------------
# correction-term builders (shared with the asymptotic expansions)
# ---------------------------------------------------------------------------


def noninteger_corrections(params: SeriesParams, s: float, N: int, m: int) -> list[float]:
    """Values of the n = 0..N partial-sum corrections for exponent s at m.

    Each term is -(-1)^n/(s+n) (a1+s)_n (a2+s)_n / n! * Gamma(m-s-n)/Gamma(m)
    times the weighted inner sum.
    """
    a1, a2 = params.a[0], params.a[1]
    out = []
    for n in range(N + 1):
        if m - s - n <= 0.0:
            raise DomainError(f"m={m} too small for correction order n={n} at s={s}")
        c = (-1) ** n / (s + n) * _poch(a1 + s, n) * _poch(a2 + s, n) / math.factorial(n)
        ratio = math.exp(lgamma_ratio(float(m), -s - n))
        out.append(-c * ratio * _inner_sum(params, a1 + s, a2 + s, n))
    return out


def balanced_correction_coeffs(params: SeriesParams) -> tuple[float, float]:
    """(c1, c2) with corrections +c1/(m-1) and -c2/((m-1)(m-2)) in the balanced case."""
    e1 = log_coefficient_balanced(params, 1)
    e2 = log_coefficient_balanced(params, 2)
    return -e1, -e2


@dataclass(frozen=True)
class NegativeBlocks:
    """Finite coefficient data for the negative-integer case."""

    t: int
    h: tuple[float, ...]
    v0: float
    v1: float
    v2: float


def negative_blocks(params: SeriesParams, t: int) -> NegativeBlocks:
    h = tuple(growing_coefficient(params, t, n) for n in range(t))
    v0 = log_coefficient_negative(params, t, 0)
    v1 = log_coefficient_negative(params, t, 1)
    v2 = log_coefficient_negative(params, t, 2)
    return NegativeBlocks(t, h, v0, v1, v2)


def growing_block(blocks: NegativeBlocks, m: int) -> list[float]:
    """Per-n values of the growing partial-sum block.

    Composing the continuation formula with the partial-sum identity cancels
    the Gamma(t-n) inside h_n; both forms coincide for t-n <= 2, and only the
    cancelled form keeps the remainder at O(m^-3) for larger t.
    """
    t = blocks.t
    out = []
    for n in range(t):
        ratio = math.exp(lgamma_ratio(float(m), float(t - n)))
        out.append(blocks.h[n] / ((t - n) * math.gamma(t - n)) * ratio)
    return out


# ---------------------------------------------------------------------------
# infinite-sum constants
# ---------------------------------------------------------------------------


def _weight_logs_gamma_over_poch(params: SeriesParams, K: int, s: float):
    """Signed-log weights (s)_k / ((a1+s)_k (a2+s)_k), k = 0..K."""
    ls, ss = _poch_prefix(s, K)
    lx, sx = _poch_prefix(params.a[0] + s, K)
    ly, sy = _poch_prefix(params.a[1] + s, K)
    return ls - lx - ly, ss * sx * sy


def _weight_logs_factorial(params: SeriesParams, K: int):
    """Signed-log weights Gamma(k) / ((a1)_k (a2)_k) for k >= 1 (index 0 unused)."""
    lx, sx = _poch_prefix(params.a[0], K)
    ly, sy = _poch_prefix(params.a[1], K)
    logs = np.zeros(K + 1)
    for k in range(1, K + 1):
        logs[k] = math.lgamma(k) - lx[k] - ly[k]
    return logs, (sx * sy).astype(np.int8)


def _plain_tail_sum(params: SeriesParams, weights_fn, ctl: TailControl,
                    shift: int = 0, start: int = 0, k_cap: int | None = None):
    """Literal truncation protocol: sum term_k until a window of consecutive
    terms falls below rel_tol * |sum|.  Returns None if the budget runs out
    (the caller then falls back to extraction or raises TailError)."""
    K = 64
    cap = ctl.k_max if k_cap is None else min(k_cap, ctl.k_max)
    while True:
        K = min(K, cap)
        table = weight_table(params, K + shift)
        logs, signs = weights_fn(params, K)
        terms = np.zeros(K + 1)
        for k in range(start, K + 1):
            sa = table.sign[k + shift]
            if sa != 0 and signs[k] != 0:
                terms[k] = sa * signs[k] * math.exp(logs[k] + table.log_abs[k + shift])
        run = 0.0
        window = 0
        for k in range(start, K + 1):
            run += terms[k]
            if abs(terms[k]) <= ctl.rel_tol * max(abs(run), 1e-300):
                window += 1
                if window >= ctl.min_decay_window:
                    value = math.fsum(terms[start:k + 1])
                    delta = params.tail_decay()
                    bound = 0.0 if terms[k] == 0.0 or not math.isfinite(delta) \
                        else abs(terms[k]) * k / delta
                    if bound > 100.0 * ctl.rel_tol * max(abs(value), 1e-300):
                        raise TailError(
                            f"tail bound {bound:.3e} exceeds tolerance for |sum|={abs(value):.3e}"
                        )
                    return SumResult(value, bound, k, "terminated")
            else:
                window = 0
        if K >= cap:
            return None
        K *= 2


def _extraction_grid(growth: float) -> list[int]:
    """Geometric m-grid whose top balances cancellation (eps * m^growth)
    against the Richardson-cleaned remainder."""
    if growth <= 0.25:
        m0 = 4096
    elif growth <= 1.25:
        m0 = 1024
    elif growth <= 2.25:
        m0 = 256
    else:
        m0 = 128
    return [m0 * 2 ** j for j in range(4)]


def _extract(params: SeriesParams, mdep_fn, base_order: float, growth: float,
             ctl: TailControl, name: str, quant: float = 0.0) -> SumResult:
    ms = _extraction_grid(growth)
    sums = partial_sums_at(params, ms)
    mdep = np.array([mdep_fn(m) for m in ms])
    vals = sums - mdep
    ladder = [base_order + i for i in range(len(ms) - 1)]
    value, stage = richardson(vals, ladder)
    scale = max(float(np.max(np.abs(sums))), float(np.max(np.abs(mdep))), abs(value))
    # 64x covers segment-sum drift plus Richardson noise amplification
    # (calibrated against high-precision oracles across the exponent range)
    floor = 64.0 * _EPS * scale + quant
    bound = stage + floor
    if stage > 100.0 * max(ctl.rel_tol * abs(value), floor):
        raise TailError(
            f"partial-sum extraction for the {name} did not stabilize "
            f"(stage change {stage:.3e}, value {value:.3e})"
        )
    return SumResult(float(value), float(bound), ms[-1], "extrapolated")


def _require_convergent(params: SeriesParams, name: str) -> None:
    if not params.tail_convergent:
        bad = [f"a_{j + 3}={params.a[j + 2]!r}" for j in range(params.p - 1)
               if params.a[j + 2] <= 0.0]
        raise ConvergenceError(
            f"the {name} requires a_j > 0 for j >= 3; violated by {', '.join(bad)}"
        )


def limit_constant_detail(params: SeriesParams, ctl: TailControl | None = None,
                          exponent: float | None = None) -> SumResult:
    """Constant term of the analytic part; the m -> infinity limit of the
    partial sums whenever the exponent is positive."""
    ctl = ctl or DEFAULT_CONTROL
    s = params.s if exponent is None else float(exponent)
    if is_near_nonpositive_integer(s):
        raise PoleError(f"limit constant undefined at non-positive integer exponent s={s!r}")
    _require_convergent(params, "limit constant")
    plain = _plain_tail_sum(params, lambda p, K: _weight_logs_gamma_over_poch(p, K, s),
                            ctl, k_cap=1024 if ctl.accelerate else None)
    if plain is not None:
        v = gamma_ratio([params.a[0], params.a[1], s],
                        [params.a[0] + s, params.a[1] + s]).to_float()
        return SumResult(v * plain.value, abs(v) * plain.error_bound,
                         plain.terms_used, plain.method)
    if not ctl.accelerate:
        raise TailError("limit-constant tail did not meet tolerance within k_max "
                        "(acceleration disabled)")
    N_ext = max(3, math.ceil(-s) + 2)
    quant = 0.0
    return _extract(
        params,
        lambda m: math.fsum(noninteger_corrections(params, s, N_ext, m)),
        base_order=s + N_ext + 1,
        growth=max(0.0, -s),
        ctl=ctl,
        name="limit constant",
        quant=quant,
    )


def limit_constant(params: SeriesParams, ctl: TailControl | None = None,
                   exponent: float | None = None) -> float:
    return limit_constant_detail(params, ctl, exponent).value


def constant_balanced_detail(params: SeriesParams,
                             ctl: TailControl | None = None) -> SumResult:
    """The constant coefficient of the zero-balanced expansion:
    2 psi(1) - psi(a1) - psi(a2) + sum_{k>=1} Gamma(k)/((a1)_k (a2)_k) A_k."""
    ctl = ctl or DEFAULT_CONTROL
    _require_tag(params, SpTag.ZERO, "balanced constant")
    _require_convergent(params, "balanced constant")
    a1, a2 = params.a[0], params.a[1]
    psi_part = -2.0 * EULER_GAMMA - digamma(a1) - digamma(a2)
    plain = _plain_tail_sum(params, _weight_logs_factorial, ctl, start=1,
                            k_cap=1024 if ctl.accelerate else None)
    if plain is not None:
        return SumResult(psi_part + plain.value, plain.error_bound,
                         plain.terms_used, plain.method)
    if not ctl.accelerate:
        raise TailError("balanced-constant tail did not meet tolerance within k_max "
                        "(acceleration disabled)")
    c1, c2 = balanced_correction_coeffs(params)
    quant = abs(params.s) * math.log(4096.0 * 8) ** 2

    def mdep(m: int) -> float:
        return digamma(float(m)) + c1 / (m - 1.0) - c2 / ((m - 1.0) * (m - 2.0))

    res = _extract(params, mdep, base_order=3.0, growth=0.0, ctl=ctl,
                   name="balanced constant", quant=quant)
    # extracted constant is CT = psi(1) - psi(a1) - psi(a2) + SUM = d0 - psi(1)
    return SumResult(res.value - EULER_GAMMA, res.error_bound, res.terms_used, res.method)


def constant_balanced(params: SeriesParams, ctl: TailControl | None = None) -> float:
    return constant_balanced_detail(params, ctl).value


def constant_positive_detail(params: SeriesParams, t: int,
                             ctl: TailControl | None = None) -> SumResult:
    """Leading constant when the exponent equals t >= 1; identical to the
    limit constant evaluated at integer exponent (shared implementation)."""
    _require_tag(params, SpTag.POSITIVE_INTEGER, "positive-case constant", t)
    return limit_constant_detail(params, ctl, exponent=float(t))


def constant_positive(params: SeriesParams, t: int,
                      ctl: TailControl | None = None) -> float:
    return constant_positive_detail(params, t, ctl).value


def constant_negative_detail(params: SeriesParams, t: int,
                             ctl: TailControl | None = None) -> SumResult:
    """The m-independent constant of the negative-integer case (shifted
    infinite sum plus the psi-weighted finite block)."""
    ctl = ctl or DEFAULT_CONTROL
    _require_tag(params, SpTag.NEGATIVE_INTEGER, "negative-case constant", t)
    _require_convergent(params, "negative-case constant")
    a1, a2 = params.a[0], params.a[1]
    fin = ((-1) ** t * _poch(a1 - t, t) * _poch(a2 - t, t) / math.factorial(t)
           * (_inner_sum(params, a1 - t, a2 - t, t, psi_weight=t)
              + (-EULER_GAMMA - digamma(a1) - digamma(a2))
              * _inner_sum(params, a1 - t, a2 - t, t)))
    plain = _plain_tail_sum(params, _weight_logs_factorial, ctl, shift=t, start=1,
                            k_cap=1024 if ctl.accelerate else None)
    if plain is not None:
        return SumResult(fin + plain.value, plain.error_bound,
                         plain.terms_used, plain.method)
    if not ctl.accelerate:
        raise TailError("negative-case constant tail did not meet tolerance within "
                        "k_max (acceleration disabled)")
    blocks = negative_blocks(params, t)
    m_top = _extraction_grid(float(t))[-1]
    quant = abs(params.s + t) * m_top ** t * math.log(m_top) * max(
        1.0, max(abs(x) for x in blocks.h))

    def mdep(m: int) -> float:
        grow = math.fsum(growing_block(blocks, m))
        return (grow - blocks.v0 * digamma(float(m))
                - blocks.v1 / (m - 1.0) + blocks.v2 / ((m - 1.0) * (m - 2.0)))

    res = _extract(params, mdep, base_order=3.0, growth=float(t), ctl=ctl,
                   name="negative-case constant", quant=quant)
    # extracted constant is u0 + v0 psi(1)
    return SumResult(res.value + blocks.v0 * EULER_GAMMA, res.error_bound,
                     res.terms_used, res.method)


def constant_negative(params: SeriesParams, t: int,
                      ctl: TailControl | None = None) -> float:
    return constant_negative_detail(params, t, ctl).value
