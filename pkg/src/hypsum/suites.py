"""Built-in verification suites: the two closed-form special-parameter checks,
coefficient cross-representations, the binomial partial-sum identity, and
integer-limit continuity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asym
from . import coefficients as coefs
from . import series
from .errors import DegenerateRepresentationError, ParameterError
from .params import SeriesParams
from .specfun import EULER_GAMMA, digamma

__all__ = [
    "SuiteResult",
    "suite_corollary1",
    "suite_corollary2",
    "suite_ak_cross",
    "suite_binomial_identity",
    "suite_integer_limit",
    "run_suites",
    "SUITE_NAMES",
]

LN2 = math.log(2.0)

SPECIAL_ZERO_BALANCED = SeriesParams((0.5, 0.5, 0.5, 0.5, 1.25), (1.0, 1.0, 1.0, 0.25))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_error: float
    threshold: float
    detail: str


def _difference_slope(params: SeriesParams, ms: list[int], mdep) -> float:
    """Slope of log|residual| vs log m, measured on consecutive differences."""
    segments = series.segment_sums_at(params, ms)
    pts = []
    for i in range(len(ms) - 1):
        g = float(segments[i + 1]) - (mdep(ms[i + 1]) - mdep(ms[i]))
        pts.append((ms[i], abs(g)))
    logm = np.log([p[0] for p in pts])
    logg = np.log([p[1] for p in pts])
    return float(np.polyfit(logm, logg, 1)[0])


def suite_corollary1(m: int = 1000) -> SuiteResult:
    """Special zero-balanced 5F4: partial sums against the closed right side."""
    params = SPECIAL_ZERO_BALANCED

    def rhs_mdep(mm: int) -> float:
        return (digamma(float(mm)) + 0.25 / (mm - 1.0)
                - 0.125 / ((mm - 1.0) * (mm - 2.0)))

    const = EULER_GAMMA + 3.0 * LN2  # psi(m) - psi(1) + 3 ln 2 carries -psi(1)
    direct = asym.direct_partial_sum(params, m)
    resid = abs(direct - (const + rhs_mdep(m)))
    ms = [100 * 2 ** k for k in range(6)]
    slope = _difference_slope(params, ms, rhs_mdep)
    passed = resid <= 1e-7 and abs(slope + 3.0) <= 0.1
    return SuiteResult(
        "corollary1", passed, resid, 1e-7,
        f"residual(m={m})={resid:.3e}, slope={slope:.4f} (want -3 +/- 0.1)",
    )


def corollary2_params(a: float, b: float, c: float) -> SeriesParams:
    """The three-parameter zero-balanced 5F4 family."""
    sabc = a + b + c
    if sabc - 1.0 <= 0.0:
        raise ParameterError("corollary-2 family needs a+b+c > 1 (upper parameter a_4)")
    if (sabc - 1.0) / 2.0 <= 0.0:
        raise ParameterError("corollary-2 family needs (a+b+c-1)/2 > 0 (lower parameter b_4)")
    return SeriesParams(
        (a, b, c, sabc - 1.0, (sabc + 1.0) / 2.0),
        (b + c, c + a, a + b, (sabc - 1.0) / 2.0),
    )


def suite_corollary2(abc: tuple[float, float, float] = (0.3, 0.5, 0.7),
                     m: int = 1000) -> SuiteResult:
    a, b, c = abc
    params = corollary2_params(a, b, c)
    sabc = a + b + c

    def rhs_mdep(mm: int) -> float:
        return (digamma(float(mm)) + 0.5 * (sabc - 1.0) / (mm - 1.0)
                + 0.25 * (2.0 * a * b * c - sabc * (sabc - 1.0))
                / ((mm - 1.0) * (mm - 2.0)))

    const = 0.5 * (-EULER_GAMMA - digamma(a) - digamma(b) - digamma(c))
    direct = asym.direct_partial_sum(params, m)
    resid = abs(direct - (const + rhs_mdep(m)))
    ms = [100 * 2 ** k for k in range(6)]
    slope = _difference_slope(params, ms, rhs_mdep)
    passed = resid <= 1e-6 and abs(slope + 3.0) <= 0.1
    return SuiteResult(
        "corollary2", passed, resid, 1e-6,
        f"abc={abc}, residual(m={m})={resid:.3e}, slope={slope:.4f} (want -3 +/- 0.1)",
    )


def suite_ak_cross(p: int = 3, k_max: int = 20, draws: int = 100,
                   seed: int = 0) -> SuiteResult:
    """Nested table vs both closed representations over seeded random draws."""
    if p not in (3, 4):
        raise ParameterError("cross-representation suite supports p = 3 or 4")
    rng = np.random.default_rng(seed)
    closed = coefs.weight_p3_closed if p == 3 else coefs.weight_p4_closed
    worst = 0.0
    done = 0
    while done < draws:
        params = SeriesParams(rng.uniform(0.1, 2.0, p + 1), rng.uniform(0.1, 2.0, p))
        table = coefs.weight_table(params, k_max, use_cache=False)
        try:
            for k in range(k_max + 1):
                ref = table.float_value(k)
                for variant in ("first", "second"):
                    alt = closed(params, k, variant).to_float()
                    denom = max(abs(ref), abs(alt), 1e-300)
                    worst = max(worst, abs(alt - ref) / denom)
        except DegenerateRepresentationError:
            continue  # measure-zero draw; redraw per the vanishing-coefficient rule
        done += 1
    passed = worst <= 1e-12
    return SuiteResult(
        f"ak-cross-p{p}", passed, worst, 1e-12,
        f"{draws} draws, k <= {k_max}, max rel discrepancy {worst:.3e}",
    )


def suite_binomial_identity(draws: int = 200, seed: int = 0) -> SuiteResult:
    """Closed-form binomial partial sum against the brute-force left side.

    The left side cancels down to ~m^-x from O(1) terms, so the brute force
    runs in exact rational arithmetic (x is an IEEE double, hence rational);
    the measured discrepancy is then purely the closed form's own error.
    """
    from fractions import Fraction

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        x = float(rng.uniform(-3.0, 3.0))
        if abs(x) < 1e-3:
            x += math.copysign(1e-3, x if x != 0 else 1.0)
        m = int(rng.integers(1, 101))
        xf = Fraction(x)
        tot = Fraction(0)
        term = Fraction(1)
        for l in range(m):
            tot += term
            term *= (-xf + l)
            term /= 1 + l
        lhs = float(tot)
        rhs = asym.binomial_partial_sum(x, m)
        worst = max(worst, abs(rhs - lhs) / max(abs(lhs), 1e-300))
    passed = worst <= 1e-13
    return SuiteResult(
        "binomial-identity", passed, worst, 1e-13,
        f"{draws} draws, m <= 100, max rel err {worst:.3e}",
    )


def suite_integer_limit(m: int = 500) -> SuiteResult:
    """The singular-correction expansion at integer exponents must coincide
    with the dedicated integer-case expansions."""
    p1 = SeriesParams((0.5, 0.5, 0.5), (1.0, 1.5))      # s = 1 exactly
    p2 = SeriesParams((0.25, 0.5, 0.75), (1.75, 1.75))  # s = 2 exactly
    t3_at_1 = asym.expansion_noninteger(p1, 1, m).value
    t5 = asym.expansion_s_one(p1, m).value
    t3_at_2 = asym.expansion_noninteger(p2, 0, m).value
    t6 = asym.expansion_s_two(p2, m).value
    e1 = abs(t3_at_1 - t5) / max(abs(t5), 1e-300)
    e2 = abs(t3_at_2 - t6) / max(abs(t6), 1e-300)
    worst = max(e1, e2)
    passed = worst <= 1e-10
    return SuiteResult(
        "integer-limit", passed, worst, 1e-10,
        f"m={m}: |T3(s=1,N=1)-T5|rel={e1:.3e}, |T3(s=2,N=0)-T6|rel={e2:.3e}",
    )


SUITE_NAMES = ("corollary1", "corollary2", "ak-cross", "eq15", "integer-limit")


def run_suites(names=None, *, abc=(0.3, 0.5, 0.7), m: int = 1000, p: int = 3,
               k_max: int = 20, draws: int = 100, seed: int = 0) -> list[SuiteResult]:
    names = list(names) if names else list(SUITE_NAMES)
    out = []
    for name in names:
        if name == "corollary1":
            out.append(suite_corollary1(m))
        elif name == "corollary2":
            out.append(suite_corollary2(tuple(abc), m))
        elif name == "ak-cross":
            out.append(suite_ak_cross(p, k_max, draws, seed))
        elif name == "eq15":
            out.append(suite_binomial_identity(200, seed))
        elif name == "integer-limit":
            out.append(suite_integer_limit())
        else:
            raise ParameterError(f"unknown suite {name!r}; pick from {SUITE_NAMES}")
    return out
