import math
import random

import pytest

from oracles import zeta_mp
from zerodensity.arith import build_arith_tables
from zerodensity.errors import DomainError
from zerodensity.zeta import (
    afe_main_sum,
    afe_remainder_bound,
    dirichlet_sum,
    mollified_f,
    mollified_h,
    mollified_h_factored,
    mollifier,
    zeta_reference,
    zeta_with_error,
)

POINTS = [(0.5, 14.134725141734693), (0.5, 100.0), (0.6, 1000.0), (2 / 3, 2000.0), (1.0, 20.0),
          (0.4, 50.0), (2.0, 0.0), (0.5, 0.0), (0.75, 12345.678), (0.5, 99999.5)]


@pytest.mark.parametrize("sigma,t", POINTS)
def test_zeta_matches_multiprecision(sigma, t):
    value, err = zeta_with_error(complex(sigma, t), 1e-10)
    assert err <= 1e-10
    assert abs(value - zeta_mp(sigma, t)) <= err


def test_known_values():
    assert zeta_reference(2 + 0j).real == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert zeta_reference(0.5 + 0j).real == pytest.approx(-1.4603545088095868, abs=1e-12)
    assert abs(zeta_reference(complex(0.5, 14.134725141734693))) < 1e-10


def test_domain():
    with pytest.raises(DomainError):
        zeta_reference(1 + 0j)
    with pytest.raises(DomainError):
        zeta_reference(complex(0.3, 10))
    with pytest.raises(DomainError):
        zeta_reference(complex(0.5, 2e5))
    with pytest.raises(DomainError):
        zeta_reference(complex(0.5, 10), abs_err=1e-14)
    with pytest.raises(DomainError):
        afe_main_sum(complex(0.5, 10))
    with pytest.raises(DomainError):
        afe_remainder_bound(0.4, 100)


def test_dirichlet_sum_direct():
    s = complex(0.7, 33.3)
    direct = sum(n ** (-s) for n in range(1, 501))
    assert abs(dirichlet_sum(s, n_max=500) - direct) < 1e-12
    coeffs = [1.0, -2.0, 0.5]
    assert abs(dirichlet_sum(s, coeffs) - sum(c * (n + 1) ** (-s) for n, c in enumerate(coeffs))) < 1e-14


def test_afe_main_sum_length():
    s = complex(0.5, 20.9)
    assert afe_main_sum(s) == dirichlet_sum(s, n_max=20)
    assert afe_remainder_bound(1.0, 100.0) == pytest.approx(0.01755)


@pytest.fixture(scope="module")
def tables():
    return build_arith_tables(1000)


def test_mollifier(tables):
    s = complex(0.6, 40.0)
    direct = sum(tables.mu[n] * n ** (-s) for n in range(1, 31))
    assert abs(mollifier(s, 30, tables) - direct) < 1e-13
    # the full Moebius series at sigma = 2 is 1/zeta(2)
    assert mollifier(2 + 0j, 1000, tables).real == pytest.approx(6 / math.pi**2, abs=2e-3)


def test_h_vanishes_at_zero(tables):
    rho = complex(0.5, 14.134725141734693)
    assert abs(mollified_h(rho, 50, tables)) < 1e-8


def test_h_bounds_on_sampled_points(tables):
    rng = random.Random(7)
    for i in range(1000):
        s = complex(rng.uniform(0.55, 0.7), rng.uniform(20, 2000))
        X = rng.choice([1, 5, 50, 433])
        f = mollified_f(s, X, tables)
        h = mollified_h(s, X, tables)
        assert abs(h) <= 1 + abs(f) ** 2 + 1e-12
        # log|1 - f^2| <= log(1 + |f|^2) <= |f|^2
        assert math.log(abs(h)) <= abs(f) ** 2 + 1e-12
        if i % 20 == 0:
            h2 = mollified_h_factored(s, X, tables)
            assert abs(h - h2) <= 1e-9 * max(1.0, abs(h))
