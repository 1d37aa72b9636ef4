import math

import pytest
from hypothesis import given, settings, strategies as st

from zerodensity.errors import DomainError, ParseError
from zerodensity.extrange import (
    ONE,
    ZERO,
    ExtReal,
    xr_add,
    xr_cmp,
    xr_from_float,
    xr_from_log,
    xr_from_log10,
    xr_mul,
    xr_parse,
    xr_pow,
)

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda x: abs(x) > 1e-300 or x == 0)
moderate = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False).filter(lambda x: x == 0 or abs(x) > 1e-100)


@given(finite)
def test_float_roundtrip(x):
    assert float(xr_from_float(x)) == pytest.approx(x, rel=1e-15, abs=0)


@given(moderate, moderate)
def test_mul_matches_float(x, y):
    assert float(xr_from_float(x) * xr_from_float(y)) == pytest.approx(x * y, rel=1e-14, abs=0)


@given(moderate, moderate)
def test_add_matches_float(x, y):
    got = float(xr_add(xr_from_float(x), xr_from_float(y)))
    exact = math.fsum([x, y])
    scale = max(abs(x), abs(y))
    assert abs(got - exact) <= 1e-13 * scale


@given(moderate, moderate)
def test_compare_matches_float(x, y):
    a, b = xr_from_float(x), xr_from_float(y)
    expected = (x > y) - (x < y)
    assert xr_cmp(a, b) == expected
    assert (a < b) == (x < y)
    assert (a == b) == (x == y)


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=-1e6, max_value=1e6))
def test_huge_products_add_logs(l1, l2):
    a, b = xr_from_log10(l1), xr_from_log10(l2)
    assert (a * b).log10 == pytest.approx(l1 + l2, rel=1e-14, abs=1e-9)


@settings(max_examples=50)
@given(st.floats(min_value=-1e5, max_value=1e5), st.sampled_from([-1, 1]))
def test_str_parse_roundtrip(l, sign):
    x = xr_from_log10(l, sign)
    y = xr_parse(str(x))
    assert y.sign == sign
    assert y.log10 == pytest.approx(l, rel=1e-11, abs=1e-11)


def test_far_beyond_double_range():
    big = xr_from_log10(400.0)
    assert big > xr_from_float(1e308)
    assert str(big) == "+10^400"
    with pytest.raises(OverflowError):
        float(big)
    assert float(big / xr_from_log10(399.0)) == pytest.approx(10.0, rel=1e-12)


def test_exact_cancellation_gives_zero():
    x = xr_from_log10(500.0)
    assert (x - x).is_zero()
    assert (x - x) == ZERO
    assert str(ZERO) == "0"


def test_pow():
    assert float(xr_pow(xr_from_float(-2.0), 3)) == pytest.approx(-8.0)
    assert float(xr_from_float(-2.0) ** 2) == pytest.approx(4.0)
    assert xr_pow(ZERO, 0) == ONE
    with pytest.raises(DomainError):
        xr_pow(xr_from_float(-2.0), 0.5)
    with pytest.raises(ZeroDivisionError):
        xr_pow(ZERO, -1)
    assert xr_pow(xr_from_log10(1e5), 0.5).log10 == pytest.approx(5e4, rel=1e-14)


def test_construction_errors():
    with pytest.raises(DomainError):
        ExtReal(2, 0.0)
    with pytest.raises(DomainError):
        xr_from_float(math.inf)
    with pytest.raises(DomainError):
        xr_from_log(math.nan)
    with pytest.raises(ParseError):
        xr_parse("ten")
    with pytest.raises(ParseError):
        xr_parse("10^abc")


def test_zero_signs_compare_equal():
    assert ExtReal(0, 5.0) == ZERO
    assert hash(ExtReal(0, 3.0)) == hash(ZERO)
    assert xr_mul(ZERO, xr_from_log10(900)) == ZERO
    assert xr_parse("0") == ZERO
    assert float(xr_parse("-10^2")) == pytest.approx(-100.0, rel=1e-15)
