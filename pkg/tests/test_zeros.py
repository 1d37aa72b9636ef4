import math
import warnings

import numpy as np
import pytest

from conftest import DATA
from zerodensity.errors import DomainError, OrderError, ParseError
from zerodensity.zeros import (
    CountBeyondDataWarning,
    load_zeros,
    parse_zeros,
    rvm_audit,
    rvm_main_term,
    serialize_zeros,
    zero_count,
    empirical_nsigma,
)


@pytest.fixture
def first10():
    return load_zeros(DATA / "zeros10.txt")


def test_fixture(first10):
    assert len(first10) == 10
    assert first10.ordinates[0] == pytest.approx(14.134725141734693, abs=1e-14)
    assert first10.max_ordinate == pytest.approx(49.773832477672302)


def test_inclusive_count(first10):
    g1 = float(first10.ordinates[0])
    assert zero_count(first10, g1) == 1
    assert zero_count(first10, np.nextafter(g1, 0)) == 0
    assert zero_count(first10, 30.0) == 3
    with pytest.warns(CountBeyondDataWarning):
        assert zero_count(first10, 100.0) == 10


def test_parse_errors():
    with pytest.raises(OrderError, match="line 3"):
        parse_zeros("# c\n21.0\n14.1\n")
    with pytest.raises(OrderError):
        parse_zeros("14.1\n14.1\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_zeros("14.1\nabc\n")
    with pytest.raises(ParseError):
        parse_zeros("-1.0\n")
    assert len(parse_zeros("")) == 0


def test_roundtrip(first10):
    again = parse_zeros(serialize_zeros(first10))
    assert np.array_equal(again.ordinates, first10.ordinates)


def test_rvm(first10):
    assert rvm_main_term(2 * math.pi * math.e) == pytest.approx(7 / 8)
    with pytest.raises(DomainError):
        rvm_main_term(1.0)
    audit = rvm_audit(first10)
    assert audit.count == 10 and audit.max_deviation < 1.0


def test_nsigma(first10):
    assert empirical_nsigma(first10, 0.6, 40.0) == 0
    with pytest.raises(DomainError):
        empirical_nsigma(first10, 0.5, 40.0)
