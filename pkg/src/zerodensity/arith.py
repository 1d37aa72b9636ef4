"""Sieved divisor and Möbius tables, and checks of the divisor-square sums.

The tables come from a linear (smallest-prime-factor) sieve compiled with
numba.  ``prefix_d2`` holds the exact running sums of ``d(n)**2`` as int64;
for ``N = 10**8`` the last entry is about 1.6e11.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import CapacityError, DomainError, PrecisionError

__all__ = [
    "ArithTables",
    "build_arith_tables",
    "verify_cht_prefix",
    "cht_tail_bound",
    "tail_sum_oracle",
    "c_sigma_tail_check",
    "PrefixReport",
    "TailEnclosure",
    "CSigmaReport",
    "CHT_THRESHOLD",
]

MAX_LIMIT = 10**8
CHT_THRESHOLD = 433
_CHUNK = 1 << 20
# Relative slack absorbing rounding in the float64 truncated sums.
_ROUND_SLACK = 1e-13


@numba.njit(cache=True)
def _linear_sieve(n):
    d = np.zeros(n + 1, dtype=np.uint16)
    mu = np.zeros(n + 1, dtype=np.int8)
    # exponent of the smallest prime factor
    e = np.zeros(n + 1, dtype=np.uint8)
    primes = np.empty(max(16, int(1.3 * n / max(1.0, math.log(max(n, 2)))) + 16), dtype=np.int64)
    np_ = 0
    if n >= 1:
        d[1] = 1
        mu[1] = 1
    for i in range(2, n + 1):
        if e[i] == 0:
            primes[np_] = i
            np_ += 1
            e[i] = 1
            d[i] = 2
            mu[i] = -1
        for j in range(np_):
            p = primes[j]
            ip = i * p
            if ip > n:
                break
            if i % p == 0:
                e[ip] = e[i] + 1
                d[ip] = d[i] // (e[i] + 1) * (e[i] + 2)
                mu[ip] = 0
                break
            e[ip] = 1
            d[ip] = d[i] * 2
            mu[ip] = -mu[i]
    return d, mu


@dataclass(frozen=True)
class ArithTables:
    """Divisor counts, Möbius values and prefix sums of ``d(n)**2``.

    Arrays are indexed by ``n`` directly; slot 0 is a zero placeholder.
    """

    limit: int
    d: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)
    prefix_d2: np.ndarray = field(repr=False)


def build_arith_tables(limit: int) -> ArithTables:
    if not 1 <= limit <= MAX_LIMIT:
        raise CapacityError(f"sieve limit must lie in [1, {MAX_LIMIT}], got {limit}")
    limit = int(limit)
    d, mu = _linear_sieve(limit)
    prefix = np.cumsum(d.astype(np.int64) ** 2)
    for arr in (d, mu, prefix):
        arr.setflags(write=False)
    return ArithTables(limit, d, mu, prefix)


@dataclass
class PrefixReport:
    t_min: int
    t_max: int
    violations: list
    min_margin: float
    argmin: int


def _prefix_chunk(prefix, lo, hi):
    t = np.arange(lo, hi + 1, dtype=np.int64)
    rhs = 0.25 * t * np.log(t.astype(np.float64)) ** 3
    lhs = prefix[lo : hi + 1].astype(np.float64)
    margin = 1.0 - lhs / rhs
    bad = t[lhs > rhs]
    k = int(np.argmin(margin))
    return bad.tolist(), float(margin[k]), int(t[k])


def verify_cht_prefix(tables: ArithTables, t_min: int, t_max: int, workers: int = 1) -> PrefixReport:
    """Check ``sum_{n<=t} d(n)^2 <= t log^3(t) / 4`` for every integer t in range.

    The range is cut into fixed-size chunks that are merged in chunk order,
    so the report does not depend on ``workers``.
    """
    if t_min < CHT_THRESHOLD:
        raise DomainError(f"the divisor-square bound is only claimed for t >= 433, got t_min={t_min}")
    if t_max < t_min:
        raise DomainError(f"empty range [{t_min}, {t_max}]")
    if t_max > tables.limit:
        raise CapacityError(f"t_max={t_max} exceeds sieve limit {tables.limit}")
    bounds = [(lo, min(lo + _CHUNK - 1, t_max)) for lo in range(t_min, t_max + 1, _CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _prefix_chunk(tables.prefix_d2, *b), bounds))
    else:
        parts = [_prefix_chunk(tables.prefix_d2, *b) for b in bounds]
    violations = [t for bad, _, _ in parts for t in bad]
    best = min(parts, key=lambda p: p[1])
    return PrefixReport(t_min, t_max, violations, best[1], best[2])


def cht_tail_bound(X: float, tau: float) -> float:
    """Upper bound for ``sum_{n>=X} d(n)^2 / n^tau``, valid for X >= 433."""
    if tau <= 1:
        raise DomainError(f"tau must exceed 1, got {tau}")
    if X < CHT_THRESHOLD:
        raise DomainError(f"X must be at least 433, got {X}")
    L = math.log(X)
    a = tau - 1.0
    poly = L**3 / a + 3 * L**2 / a**2 + 6 * L / a**3 + 6 / a**4
    return tau / (4.0 * X**a) * poly


@dataclass
class TailEnclosure:
    """Rigorous interval ``[lo, hi]`` for a tail of ``d(n)^2 / n^tau``."""

    lo: float
    hi: float
    truncated: float
    remainder: float
    limit: int

    @property
    def remainder_fraction(self) -> float:
        return self.remainder / self.truncated if self.truncated > 0 else math.inf


def tail_sum_oracle(
    tables: ArithTables,
    X: int,
    tau: float,
    max_remainder_fraction: float | None = 0.1,
) -> TailEnclosure:
    """Enclose ``sum_{n>=X} d(n)^2 / n^tau`` using the sieved tables.

    The exact part runs over ``X <= n <= N``.  Beyond ``N`` partial summation
    against ``S(t) <= t log^3(t)/4`` gives the remainder
    ``cht_tail_bound(N, tau) - S(N) / N^tau``.

    Raises PrecisionError when the remainder exceeds
    ``max_remainder_fraction`` of the truncated sum; pass ``None`` to accept
    any remainder (the enclosure stays valid, it is only less informative).
    """
    if tau <= 1:
        raise DomainError(f"tau must exceed 1, got {tau}")
    if X < CHT_THRESHOLD:
        raise DomainError(f"X must be at least 433, got {X}")
    N = tables.limit
    if X > N:
        raise CapacityError(f"X={X} exceeds sieve limit {N}")
    n = np.arange(X, N + 1, dtype=np.float64)
    d2 = tables.d[X : N + 1].astype(np.float64) ** 2
    terms = d2 * np.exp(-tau * np.log(n))
    truncated = math.fsum(terms)
    s_n = float(tables.prefix_d2[N])
    remainder = max(0.0, cht_tail_bound(N, tau) - s_n * math.exp(-tau * math.log(N)))
    if max_remainder_fraction is not None and remainder > max_remainder_fraction * truncated:
        raise PrecisionError(
            f"remainder {remainder:.3e} exceeds {max_remainder_fraction:.0%} of the truncated sum "
            f"{truncated:.3e} at tau={tau}; use a larger sieve limit than {N}"
        )
    lo = truncated * (1.0 - _ROUND_SLACK)
    hi = (truncated + remainder) * (1.0 + _ROUND_SLACK)
    return TailEnclosure(lo, hi, truncated, remainder, N)


@dataclass
class CSigmaReport:
    sigma: float
    x0: int
    c_of_sigma: float
    rows: list  # dicts with X, hi, rhs, margin, remainder_fraction

    @property
    def ok(self) -> bool:
        return all(r["margin"] > 0 for r in self.rows)


def c_sigma_tail_check(
    tables: ArithTables,
    sigma: float,
    X0: int,
    max_remainder_fraction: float | None = None,
) -> CSigmaReport:
    """Compare the tail enclosure at ``tau = 2 sigma`` with ``C(sigma, X0) X^(1-2 sigma) log^3 X``.

    Checked at ``X in {X0, 2 X0, 10 X0}``.
    """
    from .constants import c_sigma

    if not 0.6 - 1e-12 <= sigma <= 2 / 3 + 1e-12:
        raise DomainError(f"sigma must lie in [0.6, 2/3], got {sigma}")
    if X0 < CHT_THRESHOLD:
        raise DomainError(f"X0 must be at least 433, got {X0}")
    c = c_sigma(sigma, X0)
    rows = []
    for X in (X0, 2 * X0, 10 * X0):
        enc = tail_sum_oracle(tables, X, 2 * sigma, max_remainder_fraction)
        rhs = c * X ** (1 - 2 * sigma) * math.log(X) ** 3
        rows.append(
            {
                "X": X,
                "hi": enc.hi,
                "rhs": rhs,
                "margin": 1.0 - enc.hi / rhs,
                "remainder_fraction": enc.remainder_fraction,
            }
        )
    return CSigmaReport(sigma, X0, c, rows)
