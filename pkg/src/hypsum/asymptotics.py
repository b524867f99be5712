"""Direct partial sums, auxiliary partial-sum identities, and the large-m
asymptotic expansions with their dispatcher.

Expansion mode ids (the `theorem` field) follow the interface contract:
T2 constant-only (positive exponent), T3 non-integer/positive exponent with
N+1 singular corrections, T4 zero-balanced, T5/T6 exponent 1/2, T7 negative
integer exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import continuation as cont
from . import series
from .errors import DegenerateFitError, DomainError, PoleError
from .params import DEFAULT_EPS_INT, SeriesParams, SpTag, classify
from .specfun import EULER_GAMMA, SignedLog, digamma, gamma_ratio, lgamma_ratio, ln_gamma_signed

__all__ = [
    "AsymptoticResult",
    "EvalReport",
    "OrderFit",
    "direct_partial_sum",
    "binomial_partial_sum",
    "log_term_partial_sum",
    "digamma_asymptotic",
    "expansion_convergent",
    "expansion_noninteger",
    "expansion_balanced",
    "expansion_s_one",
    "expansion_s_two",
    "expansion_negative_integer",
    "evaluate",
    "measure_order",
    "default_correction_order",
]

THEOREM_IDS = ("T2", "T3", "T4", "T5", "T6", "T7")


@dataclass(frozen=True)
class AsymptoticResult:
    """One asymptotic approximation at a given m.

    value equals constant_term plus the sum of the labelled corrections, and
    the residual against the direct partial sum is O(m^-predicted_order).
    """

    value: float
    constant_term: float
    corrections: tuple[tuple[str, float], ...]
    predicted_order: float
    theorem: str


@dataclass(frozen=True)
class EvalReport:
    m: int
    direct: float
    asymptotic: float
    residual: float
    predicted_order: float
    theorem: str


@dataclass(frozen=True)
class OrderFit:
    """Least-squares residual order measured on a geometric m-grid.

    The fit runs on consecutive residual differences (fresh segment sums minus
    correction differences): they carry the same decay exponent as the
    residual itself but cancel the shared constant exactly, staying above
    double-precision noise on grids where raw residuals sink below it.
    Difference points that fall under the estimated rounding floor of their
    own segment are excluded from the fit (used_points flags the survivors).
    """

    slope: float
    predicted_order: float
    points: tuple[tuple[int, float], ...]
    used_points: tuple[bool, ...]
    reports: tuple[EvalReport, ...]


# ---------------------------------------------------------------------------
# partial sums and partial-sum identities
# ---------------------------------------------------------------------------


def direct_partial_sum(params: SeriesParams, m: int) -> float:
    """Sum of the first m series terms (term ratio recurrence, compensated)."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    return series.partial_sum(params, m)


def binomial_partial_sum(x: float, m: int) -> float:
    """Partial sum of the binomial series for (1-z)^x at z = 1:
    sum_{l<m} (-x)_l / l! = -(1/x) (-x)_m / Gamma(m)."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    if abs(x) < 1e-14:
        raise DomainError("x must stay away from zero")
    r = round(x)
    if x == r and r >= 1 and m > r:
        return 0.0  # (-x)_m carries an exact zero factor
    if m - x > 0.0:
        # (-x)_m / Gamma(m) = Gamma(m-x) / (Gamma(-x) Gamma(m))
        g = ln_gamma_signed(-x)
        return -(1.0 / x) * g.sign * math.exp(lgamma_ratio(float(m), -x) - g.log_abs)
    from .specfun import pochhammer

    num = pochhammer(-x, m)
    val = SignedLog(num.log_abs - math.lgamma(m), num.sign)
    return -(1.0 / x) * val.to_float()


def log_term_partial_sum(n: int, m: int) -> float:
    """Closed-form partial sums of the logarithmic-term series, n in {0,1,2}."""
    if n not in (0, 1, 2):
        raise DomainError("logarithmic correction depth is limited to n <= 2")
    if m < n + 2:
        raise DomainError(f"need m >= {n + 2} for n={n}")
    if n == 0:
        return -EULER_GAMMA - digamma(float(m))
    if n == 1:
        return -1.0 / (m - 1.0)
    return 1.0 / ((m - 1.0) * (m - 2.0))


def digamma_asymptotic(m: int) -> float:
    """Display form psi(m) ~ ln m - 1/(2m) - 1/(12 m^2), exposing the log growth."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    return math.log(m) - 0.5 / m - 1.0 / (12.0 * m * m)


# ---------------------------------------------------------------------------
# expansion builders (m-independent data + per-m correction values)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Expansion:
    theorem: str
    constant: float
    predicted_order: float
    corrections: Callable[[int], list[tuple[str, float]]]
    min_m: int = 1

    def at(self, m: int) -> AsymptoticResult:
        if m < self.min_m:
            raise DomainError(f"{self.theorem} needs m >= {self.min_m}, got {m}")
        corr = tuple(self.corrections(m))
        value = math.fsum([self.constant] + [v for _, v in corr])
        return AsymptoticResult(value, self.constant, corr,
                                self.predicted_order, self.theorem)


def default_correction_order(s: float) -> int:
    """Default N for the non-integer expansion: strictly above -s, plus margin."""
    return max(0, math.ceil(-s)) + 1


def _build_convergent(params: SeriesParams, ctl) -> _Expansion:
    s = params.s
    if s <= 0.0:
        raise DomainError("constant-only expansion requires a positive exponent")
    constant = cont.limit_constant(params, ctl)
    return _Expansion("T2", constant, s, lambda m: [])


def _build_noninteger(params: SeriesParams, N: int | None, ctl,
                      eps_int: float = DEFAULT_EPS_INT) -> _Expansion:
    s = params.s
    cls = classify(s, eps_int)
    if cls.tag in (SpTag.ZERO, SpTag.NEGATIVE_INTEGER):
        raise PoleError(
            f"singular-correction expansion undefined at non-positive integer s={s!r}"
        )
    # positive-integer exponents are a valid limit of this expansion
    s_eff = float(cls.t) if cls.tag is SpTag.POSITIVE_INTEGER else s
    if N is None:
        N = default_correction_order(s_eff)
    if N <= -s_eff:
        raise DomainError(f"correction order N={N} must exceed -s={-s_eff}")
    constant = cont.limit_constant(params, ctl, exponent=s_eff)

    def corrections(m: int) -> list[tuple[str, float]]:
        vals = cont.noninteger_corrections(params, s_eff, N, m)
        return [(f"singular n={n}", v) for n, v in enumerate(vals)]

    return _Expansion("T3", constant, s_eff + N + 1, corrections)


def _build_balanced(params: SeriesParams, ctl) -> _Expansion:
    constant = cont.constant_balanced(params, ctl) + EULER_GAMMA  # d0 - psi(1)
    c1, c2 = cont.balanced_correction_coeffs(params)

    def corrections(m: int) -> list[tuple[str, float]]:
        return [
            ("psi(m)", digamma(float(m))),
            ("1/(m-1)", c1 / (m - 1.0)),
            ("1/((m-1)(m-2))", -c2 / ((m - 1.0) * (m - 2.0))),
        ]

    return _Expansion("T4", constant, 3.0, corrections, min_m=3)


def _build_s_one(params: SeriesParams, ctl) -> _Expansion:
    constant = cont.constant_positive(params, 1, ctl)
    q0 = cont.log_coefficient_positive(params, 1, 0)
    q1 = cont.log_coefficient_positive(params, 1, 1)

    def corrections(m: int) -> list[tuple[str, float]]:
        return [
            ("1/(m-1)", -q0 / (m - 1.0)),
            ("1/((m-1)(m-2))", q1 / ((m - 1.0) * (m - 2.0))),
        ]

    return _Expansion("T5", constant, 3.0, corrections, min_m=3)


def _build_s_two(params: SeriesParams, ctl) -> _Expansion:
    constant = cont.constant_positive(params, 2, ctl)
    q0 = cont.log_coefficient_positive(params, 2, 0)

    def corrections(m: int) -> list[tuple[str, float]]:
        return [("1/((m-1)(m-2))", q0 / ((m - 1.0) * (m - 2.0)))]

    return _Expansion("T6", constant, 3.0, corrections, min_m=3)


def _build_negative(params: SeriesParams, t: int, ctl) -> _Expansion:
    constant = cont.constant_negative(params, t, ctl)
    blocks = cont.negative_blocks(params, t)

    def corrections(m: int) -> list[tuple[str, float]]:
        out = [(f"growing n={n}", v)
               for n, v in enumerate(cont.growing_block(blocks, m))]
        out.append(("psi(m)", blocks.v0 * (-EULER_GAMMA - digamma(float(m)))))
        out.append(("1/(m-1)", -blocks.v1 / (m - 1.0)))
        out.append(("1/((m-1)(m-2))", blocks.v2 / ((m - 1.0) * (m - 2.0))))
        return out

    return _Expansion("T7", constant, 3.0, corrections, min_m=3)


# public per-m wrappers


def expansion_convergent(params: SeriesParams, ctl=None, m: int = 1) -> AsymptoticResult:
    return _build_convergent(params, ctl).at(m)


def expansion_noninteger(params: SeriesParams, N: int | None, m: int,
                         ctl=None) -> AsymptoticResult:
    return _build_noninteger(params, N, ctl).at(m)


def expansion_balanced(params: SeriesParams, m: int, ctl=None) -> AsymptoticResult:
    _check_tag(params, SpTag.ZERO)
    return _build_balanced(params, ctl).at(m)


def expansion_s_one(params: SeriesParams, m: int, ctl=None) -> AsymptoticResult:
    _check_tag(params, SpTag.POSITIVE_INTEGER, 1)
    return _build_s_one(params, ctl).at(m)


def expansion_s_two(params: SeriesParams, m: int, ctl=None) -> AsymptoticResult:
    _check_tag(params, SpTag.POSITIVE_INTEGER, 2)
    return _build_s_two(params, ctl).at(m)


def expansion_negative_integer(params: SeriesParams, t: int, m: int,
                               ctl=None) -> AsymptoticResult:
    _check_tag(params, SpTag.NEGATIVE_INTEGER, t)
    return _build_negative(params, t, ctl).at(m)


def _check_tag(params: SeriesParams, tag: SpTag, t: int | None = None,
               eps_int: float = DEFAULT_EPS_INT) -> None:
    cls = classify(params.s, eps_int)
    if cls.tag is not tag or (t is not None and cls.t != t):
        raise DomainError(
            f"expansion requires exponent class {tag.value}"
            + (f" (t={t})" if t is not None else "")
            + f"; got s={params.s!r} ({cls.tag.value}, t={cls.t})"
        )


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------


def _dispatch(params: SeriesParams, N: int | None, force_theorem: str | None,
              ctl, eps_int: float) -> _Expansion:
    if force_theorem is not None:
        if force_theorem not in THEOREM_IDS:
            raise DomainError(f"unknown expansion id {force_theorem!r}")
        cls = classify(params.s, eps_int)
        if force_theorem == "T2":
            return _build_convergent(params, ctl)
        if force_theorem == "T3":
            return _build_noninteger(params, N, ctl, eps_int)
        if force_theorem == "T4":
            _check_tag(params, SpTag.ZERO, eps_int=eps_int)
            return _build_balanced(params, ctl)
        if force_theorem == "T5":
            _check_tag(params, SpTag.POSITIVE_INTEGER, 1, eps_int)
            return _build_s_one(params, ctl)
        if force_theorem == "T6":
            _check_tag(params, SpTag.POSITIVE_INTEGER, 2, eps_int)
            return _build_s_two(params, ctl)
        _check_tag(params, SpTag.NEGATIVE_INTEGER, eps_int=eps_int)
        return _build_negative(params, cls.t, ctl)
    cls = classify(params.s, eps_int)
    if cls.tag is SpTag.ZERO:
        return _build_balanced(params, ctl)
    if cls.tag is SpTag.NEGATIVE_INTEGER:
        return _build_negative(params, cls.t, ctl)
    if cls.tag is SpTag.POSITIVE_INTEGER and cls.t == 1:
        return _build_s_one(params, ctl)
    if cls.tag is SpTag.POSITIVE_INTEGER and cls.t == 2:
        return _build_s_two(params, ctl)
    return _build_noninteger(params, N, ctl, eps_int)


def evaluate(params: SeriesParams, m: int, N: int | None = None,
             force_theorem: str | None = None, ctl=None,
             eps_int: float = DEFAULT_EPS_INT) -> EvalReport:
    """Direct partial sum vs the dispatched asymptotic approximation at m."""
    exp = _dispatch(params, N, force_theorem, ctl, eps_int)
    res = exp.at(m)
    direct = direct_partial_sum(params, m)
    return EvalReport(m, direct, res.value, direct - res.value,
                      res.predicted_order, res.theorem)


def measure_order(params: SeriesParams, ms, N: int | None = None,
                  force_theorem: str | None = None, ctl=None,
                  eps_int: float = DEFAULT_EPS_INT) -> OrderFit:
    """Fit the residual decay exponent over a geometric m-grid.

    Uses consecutive residual differences: G_i = seg_{i->i+1} - (corr(m_{i+1})
    - corr(m_i)), whose log-log slope equals -predicted_order as well, with
    the shared constant term cancelled exactly.
    """
    ms = sorted(int(m) for m in ms)
    if len(ms) < 3:
        raise DomainError("order measurement needs at least three m-values")
    exp = _dispatch(params, N, force_theorem, ctl, eps_int)
    segments = series.segment_sums_at(params, ms)
    totals = np.cumsum(segments)  # reporting only; differences use segments
    reports = []
    corr_totals = []
    for i, m in enumerate(ms):
        res = exp.at(m)
        corr_totals.append(math.fsum(v for _, v in res.corrections))
        reports.append(EvalReport(m, float(totals[i]), res.value,
                                  float(totals[i]) - res.value,
                                  res.predicted_order, res.theorem))
    points = []
    used = []
    for i in range(len(ms) - 1):
        dcorr = corr_totals[i + 1] - corr_totals[i]
        g = float(segments[i + 1]) - dcorr
        points.append((ms[i], abs(g)))
        # rounding floor of this difference: term-recurrence drift grows like
        # sqrt(segment length) in ulps of the segment magnitude
        floor = (8.0 * math.sqrt(ms[i + 1]) * 2.220446049250313e-16
                 * (abs(float(segments[i + 1])) + abs(dcorr)))
        used.append(abs(g) > floor)
    if any(p[1] == 0.0 and u for p, u in zip(points, used)):
        raise DegenerateFitError("a residual difference is exactly zero")
    if sum(used) < 3:
        raise DegenerateFitError(
            "fewer than three residual differences above the rounding floor"
        )
    logm = np.log([p[0] for p, u in zip(points, used) if u])
    logg = np.log([p[1] for p, u in zip(points, used) if u])
    slope = float(np.polyfit(logm, logg, 1)[0])
    return OrderFit(slope, reports[0].predicted_order, tuple(points), tuple(used),
                    tuple(reports))
