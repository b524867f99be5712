import math

import pytest
from hypothesis import given, strategies as st

from hypsum.errors import ParameterError
from hypsum.params import SeriesParams, SpTag, classify, s_exponent


def test_s_exponent_examples():
    assert s_exponent(SeriesParams((0.5, 0.7), (1.9,))) == pytest.approx(0.7, abs=1e-15)
    zb = SeriesParams((0.5, 0.5, 0.5, 0.5, 1.25), (1.0, 1.0, 1.0, 0.25))
    assert s_exponent(zb) == 0.0
    assert s_exponent(SeriesParams((1.0, 1.0), (1.0,))) == -1.0


def test_validation_shapes():
    with pytest.raises(ParameterError):
        SeriesParams((0.5,), ())
    with pytest.raises(ParameterError):
        SeriesParams((0.5, 0.5, 0.5), (1.0,))
    with pytest.raises(ParameterError):
        SeriesParams((0.5, math.inf), (1.0,))


def test_validation_poles():
    with pytest.raises(ParameterError):
        SeriesParams((-1.0, 0.5), (1.0,))  # terminating upper parameter
    with pytest.raises(ParameterError):
        SeriesParams((0.5, 0.5), (0.0,))
    with pytest.raises(ParameterError):
        SeriesParams((0.5, 0.5), (-3.0,))
    # negative non-integer lower parameter is allowed
    SeriesParams((0.5, 0.5), (-0.5,))


def test_classify_examples():
    assert classify(0.7).tag is SpTag.NONINTEGER
    assert classify(0.0).tag is SpTag.ZERO
    c = classify(-2.0 + 1e-12)
    assert c.tag is SpTag.NEGATIVE_INTEGER and c.t == 2
    c = classify(3.0)
    assert c.tag is SpTag.POSITIVE_INTEGER and c.t == 3
    with pytest.raises(ValueError):
        classify(1.0, eps_int=0.0)


@given(st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
def test_classify_total_and_unique(s):
    c = classify(s)
    assert c.tag in (SpTag.NONINTEGER, SpTag.ZERO,
                     SpTag.POSITIVE_INTEGER, SpTag.NEGATIVE_INTEGER)
    assert c.s == s
    if c.tag is SpTag.NONINTEGER or c.tag is SpTag.ZERO:
        assert c.t == 0
    else:
        assert c.t >= 1


@given(
    a=st.lists(st.floats(min_value=0.1, max_value=3.0), min_size=3, max_size=5),
    data=st.data(),
)
def test_s_exponent_permutation_invariance(a, data):
    b = data.draw(st.lists(st.floats(min_value=0.1, max_value=3.0),
                           min_size=len(a) - 1, max_size=len(a) - 1))
    perm_a = data.draw(st.permutations(a))
    perm_b = data.draw(st.permutations(b))
    s1 = s_exponent(SeriesParams(a, b))
    s2 = s_exponent(SeriesParams(perm_a, perm_b))
    assert s1 == s2  # fsum makes the rounded sum order-independent


def test_tail_convergent_flag():
    assert SeriesParams((0.5, 0.7), (1.9,)).tail_convergent
    assert SeriesParams((0.5, 0.7, 0.2), (1.0, 1.0)).tail_convergent
    assert not SeriesParams((0.5, 0.7, -0.2), (0.6, 0.6)).tail_convergent
    assert SeriesParams((0.5, 0.7, 0.25), (1.0, 1.0)).tail_decay() == 0.25
