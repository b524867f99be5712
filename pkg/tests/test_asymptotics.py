import math

import numpy as np
import pytest

from hypsum.asymptotics import (binomial_partial_sum, default_correction_order,
                                digamma_asymptotic, direct_partial_sum,
                                evaluate, expansion_balanced,
                                expansion_convergent,
                                expansion_negative_integer,
                                expansion_noninteger, expansion_s_one,
                                expansion_s_two, log_term_partial_sum,
                                measure_order)
from hypsum.continuation import limit_constant
from hypsum.errors import DomainError, PoleError
from hypsum.params import SeriesParams
from hypsum.series import leading_term, segment_sums_at
from hypsum.specfun import EULER_GAMMA, digamma, gamma_ratio

GAUSS = SeriesParams((0.5, 0.7), (1.9,))
HARMONIC_TAIL = SeriesParams((1.0, 1.0), (2.0,))  # terms 1/(1+l)


def test_direct_partial_sum_m1_is_leading_term():
    for params in (GAUSS, SeriesParams((0.5, 0.5, 0.5), (1.0, 1.0))):
        assert direct_partial_sum(params, 1) == pytest.approx(
            leading_term(params).to_float(), rel=1e-15)


def test_direct_partial_sum_harmonic():
    # terms reduce to 1/(1+l); five terms give 137/60
    assert direct_partial_sum(HARMONIC_TAIL, 5) == pytest.approx(137.0 / 60.0, rel=1e-15)


def test_direct_partial_sum_oracle():
    params = SeriesParams((0.5, 0.5, 0.5), (1.0, 1.0))
    assert direct_partial_sum(params, 100) == pytest.approx(
        7.5575667948114947164, rel=1e-14)


def test_direct_partial_sum_negative_lower_parameter():
    # Gamma(b+l) may be negative at small l; the term signs must follow
    params = SeriesParams((0.5, 0.75, 0.75), (0.5, -0.5))
    t0 = leading_term(params)
    assert t0.sign == -1
    assert direct_partial_sum(params, 1) == pytest.approx(t0.to_float(), rel=1e-15)


def test_direct_partial_sum_validates_m():
    with pytest.raises(DomainError):
        direct_partial_sum(GAUSS, 0)


def test_telescoping_invariant():
    params = SeriesParams((0.4, 0.6, 0.8), (1.1, 1.3))
    for m in (1, 7, 100, 1234, 10_000):
        lhs = direct_partial_sum(params, m + 1) - direct_partial_sum(params, m)
        term = gamma_ratio([a + m for a in params.a],
                           [b + m for b in params.b] + [1.0 + m]).to_float()
        assert lhs == pytest.approx(term, rel=1e-12)


def test_binomial_partial_sum_examples():
    assert binomial_partial_sum(0.5, 1) == pytest.approx(1.0, rel=1e-15)
    for x, m in ((1.3, 7), (-0.4, 10)):
        brute = []
        term = 1.0
        for l in range(m):
            brute.append(term)
            term *= (-x + l) / (1.0 + l)
        assert binomial_partial_sum(x, m) == pytest.approx(
            math.fsum(brute), rel=1e-13)
    # positive-integer x: the closed form is exactly zero once m > x
    assert binomial_partial_sum(3.0, 10) == 0.0
    with pytest.raises(DomainError):
        binomial_partial_sum(1e-15, 5)


def test_log_term_partial_sum_closed_forms():
    assert log_term_partial_sum(0, 4) == pytest.approx(-(1.0 + 0.5 + 1.0 / 3.0), rel=1e-14)
    assert log_term_partial_sum(1, 5) == pytest.approx(-0.25, rel=1e-15)
    assert log_term_partial_sum(2, 5) == pytest.approx(1.0 / 12.0, rel=1e-15)
    with pytest.raises(DomainError):
        log_term_partial_sum(2, 3)
    with pytest.raises(DomainError):
        log_term_partial_sum(3, 10)


def test_log_term_partial_sum_brute_force():
    # c_l^(n) = -(1/l)(-1)^n n! Gamma(l-n)/Gamma(l) for l > n, with the special
    # low-index values c_1^(1) = -1, c_1^(2) = -1, c_2^(2) = 3/2
    def c(n, l):
        if l > n:
            return (-1.0 / l) * (-1.0) ** n * math.factorial(n) * math.exp(
                math.lgamma(l - n) - math.lgamma(l))
        return {(1, 1): -1.0, (2, 1): -1.0, (2, 2): 1.5}[(n, l)]

    for n in (0, 1, 2):
        for m in range(n + 2, 51):
            brute = math.fsum(c(n, l) for l in range(1, m))
            assert log_term_partial_sum(n, m) == pytest.approx(
                brute, rel=1e-12, abs=1e-13), (n, m)


def test_digamma_asymptotic():
    assert digamma_asymptotic(1) == pytest.approx(-0.5 - 1.0 / 12.0, rel=1e-15)
    assert abs(digamma_asymptotic(100) - digamma(100.0)) < 1e-6
    assert abs(digamma_asymptotic(10_000) - digamma(10_000.0)) < 1e-12


def test_expansion_convergent():
    res = expansion_convergent(GAUSS, m=1)
    assert res.theorem == "T2"
    assert res.constant_term == pytest.approx(limit_constant(GAUSS), rel=1e-15)
    assert res.corrections == ()
    assert res.predicted_order == pytest.approx(0.7)
    with pytest.raises(DomainError):
        expansion_convergent(SeriesParams((1.0, 1.0), (1.5,)))  # s = -0.5


def test_expansion_noninteger_structure():
    res = expansion_noninteger(GAUSS, 2, 100)
    assert res.theorem == "T3"
    assert res.predicted_order == pytest.approx(0.7 + 2 + 1)
    assert len(res.corrections) == 3
    assert res.value == pytest.approx(
        res.constant_term + math.fsum(v for _, v in res.corrections), rel=1e-15)
    # n=0 correction for p=1: -(1/s) Gamma(m-s)/Gamma(m)
    n0 = res.corrections[0][1]
    ref = -(1.0 / 0.7) * math.exp(math.lgamma(100 - 0.7) - math.lgamma(100.0))
    assert n0 == pytest.approx(ref, rel=1e-11)
    with pytest.raises(DomainError):
        expansion_noninteger(SeriesParams((1.0, 1.0), (1.5,)), 0, 100)  # N <= -s
    with pytest.raises(PoleError):
        expansion_noninteger(SeriesParams((1.0, 1.0), (1.0,)), 3, 100)  # s = -1


def test_expansion_balanced_printed_forms():
    # p=1 zero-balanced 2F1: the spec's explicit value composition
    params = SeriesParams((0.5, 0.5), (1.0,))
    m = 1000
    res = expansion_balanced(params, m)
    assert res.theorem == "T4"
    expected = (-EULER_GAMMA - 2.0 * digamma(0.5) + digamma(float(m))
                + 0.25 / (m - 1.0)
                - 0.25 * (0.5 * 1.5 * 0.5 * 1.5) / ((m - 1.0) * (m - 2.0)))
    assert res.value == pytest.approx(expected, rel=1e-12)
    direct = direct_partial_sum(params, m)
    assert abs(direct - res.value) < 1e-7
    with pytest.raises(DomainError):
        expansion_balanced(params, 2)  # m below the correction validity
    with pytest.raises(DomainError):
        expansion_balanced(GAUSS, 100)  # s != 0


def test_expansion_s_one_telescoping_case():
    # a=(1,1), b=(3): terms 1/((l+1)(l+2)) telescope to 1 - 1/(m+1)
    params = SeriesParams((1.0, 1.0), (3.0,))
    res = expansion_s_one(params, 500)
    assert res.constant_term == pytest.approx(1.0, rel=1e-12)
    direct = 1.0 - 1.0 / 501.0
    assert direct_partial_sum(params, 500) == pytest.approx(direct, rel=1e-14)
    # A_1 = 0 for p=1: corrections are -1/(m-1) + 2/((m-1)(m-2))
    assert res.corrections[0][1] == pytest.approx(-1.0 / 499.0, rel=1e-13)
    assert res.corrections[1][1] == pytest.approx(2.0 / (499.0 * 498.0), rel=1e-13)
    # residual is -6/m^3 to leading order
    assert abs(direct - res.value) < 1e-7


def test_expansion_s_two_residual():
    params = SeriesParams((0.25, 0.5, 0.75), (1.75, 1.75))
    rep = evaluate(params, 2000)
    assert rep.theorem == "T6"
    assert abs(rep.residual) < 1e-8


def test_expansion_negative_integer_residuals():
    t1 = SeriesParams((0.5, 0.75, 0.5), (0.375, 0.375))
    rep1 = evaluate(t1, 2000)
    assert rep1.theorem == "T7"
    assert abs(rep1.residual) < 1e-7
    t2 = SeriesParams((0.5, 2.75, 0.75), (1.0, 1.0))
    rep2 = evaluate(t2, 2000)
    assert rep2.theorem == "T7"
    assert abs(rep2.residual) < 1e-6


def test_expansion_negative_integer_t3_growing_block():
    # discriminates the growing-block normalization at t = 3: the form with
    # the cancelled Gamma(t-n) reproduces the m^3-scale partial sums to
    # machine precision, while the uncancelled variant would be off by
    # Gamma(t)^2 = 4 in the leading block (relative residual O(1))
    params = SeriesParams((0.5, 0.75), (-1.75,))  # p=1, s = -3
    for m in (64, 256, 1024):
        rep = evaluate(params, m)
        assert rep.theorem == "T7"
        assert abs(rep.residual) <= 1e-9 * abs(rep.direct)
    # decay order is only coarsely measurable: the usable window sits below
    # m ~ 270 (eps m^3 = C m^-3) where subleading 1/m corrections still bias
    # the fit; the uncancelled variant would instead give a growing residual
    fit = measure_order(params, [8 * 2 ** k for k in range(6)])
    assert fit.slope == pytest.approx(-3.0, abs=0.45)


def test_evaluate_dispatch_rules():
    assert evaluate(SeriesParams((0.6, 0.8, 0.25), (0.9, 0.75)), 100).theorem == "T4"
    assert evaluate(GAUSS, 100).theorem == "T3"
    assert evaluate(SeriesParams((0.5, 0.75), (-0.75,)), 100).theorem == "T7"
    assert evaluate(SeriesParams((0.5, 0.5, 0.5), (1.0, 1.5)), 100).theorem == "T5"
    assert evaluate(SeriesParams((0.25, 0.5, 0.75), (1.75, 1.75)), 100).theorem == "T6"
    # positive integer t >= 3 goes through the singular-correction expansion
    assert evaluate(SeriesParams((0.5, 0.75), (4.25,)), 100).theorem == "T3"
    # T2 only when forced
    rep = evaluate(GAUSS, 100, force_theorem="T2")
    assert rep.theorem == "T2" and rep.predicted_order == pytest.approx(0.7)
    with pytest.raises(DomainError):
        evaluate(GAUSS, 100, force_theorem="T4")
    with pytest.raises(DomainError):
        evaluate(GAUSS, 100, force_theorem="T9")


def test_default_correction_order():
    assert default_correction_order(0.7) == 1
    assert default_correction_order(-0.5) == 2
    assert default_correction_order(-2.3) == 4
    assert default_correction_order(2.0) == 1


def test_integer_limit_continuity():
    p1 = SeriesParams((0.5, 0.5, 0.5), (1.0, 1.5))
    t3 = expansion_noninteger(p1, 1, 500)
    t5 = expansion_s_one(p1, 500)
    assert t3.value == pytest.approx(t5.value, rel=1e-10)
    p2 = SeriesParams((0.25, 0.5, 0.75), (1.75, 1.75))
    t3b = expansion_noninteger(p2, 0, 500)
    t6 = expansion_s_two(p2, 500)
    assert t3b.value == pytest.approx(t6.value, rel=1e-10)


def test_measure_order_needs_points():
    with pytest.raises(DomainError):
        measure_order(GAUSS, [100, 200])


def test_segment_sums_match_partial_sums():
    params = SeriesParams((0.4, 0.6, 0.8), (1.1, 1.3))
    ms = [50, 100, 400, 1000]
    segs = segment_sums_at(params, ms)
    for i, m in enumerate(ms):
        assert math.fsum(segs[: i + 1]) == pytest.approx(
            direct_partial_sum(params, m), rel=1e-13)
