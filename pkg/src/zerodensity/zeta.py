"""Reference values of zeta(s), the short Dirichlet sum of the approximate
functional equation, and the Möbius-mollified functions f_X and h_X.

Points are plain Python ``complex`` numbers ``s = sigma + 1j*t``.

Every Dirichlet sum is evaluated term by term in ascending n.  Phases
``t log n`` are formed from double-double logarithms and reduced modulo
2*pi before the trig calls, and the real and imaginary parts are added with :func:`math.fsum`, which rounds correctly
and so gives the same bits regardless of how the work is split.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, PrecisionError

__all__ = [
    "zeta_reference",
    "zeta_with_error",
    "afe_main_sum",
    "afe_remainder_bound",
    "dirichlet_sum",
    "mollifier",
    "mollified_f",
    "mollified_h",
    "mollified_h_factored",
    "AFE_T_MIN",
]

AFE_T_MIN = 14.1347
AFE_REMAINDER_CONST = 1.755
T_MAX = 1e5
SIGMA_MIN = 0.4
MIN_ABS_ERR = 1e-12

_EPS = np.finfo(np.float64).eps
_EPS_LD = float(np.finfo(np.longdouble).eps)
# B_2, B_4, ..., B_10
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66)
_EM_TERMS = 4


# 2*pi split so that k * part is exact for k < 2**20
_TWO_PI_1 = 6.2831853069365025
_TWO_PI_2 = 2.43084019926898e-10
_TWO_PI_3 = 3.3334971674083515e-19
_SPLIT = 134217729.0


@lru_cache(maxsize=4)
def _log_table(n):
    """``log k`` for k = 1..n as a double-double pair ``(hi, lo)``."""
    k = np.arange(1, n + 1, dtype=np.float64)
    hi = np.log(k)
    lo = np.log1p(k.astype(np.longdouble) * np.exp(-hi.astype(np.longdouble)) - 1).astype(np.float64)
    hi.setflags(write=False)
    lo.setflags(write=False)
    return hi, lo


def _logs(n):
    size = 1 << max(10, (n - 1).bit_length())
    hi, lo = _log_table(size)
    return hi[:n], lo[:n]


def _reduced_phase(t, hi, lo):
    """``t * log n`` modulo 2*pi, accurate to a few ulps of 2*pi."""
    p = t * hi
    c = _SPLIT * t
    th = c - (c - t)
    tl = t - th
    c = _SPLIT * hi
    hh = c - (c - hi)
    hl = hi - hh
    pe = ((th * hh - p) + th * hl + tl * hh) + tl * hl
    k = np.rint(p / (_TWO_PI_1 + _TWO_PI_2))
    r = (p - k * _TWO_PI_1) - k * _TWO_PI_2
    return (r - k * _TWO_PI_3) + (pe + t * lo)


def _terms(s, logs, weights=None):
    """Terms ``w_n n^{-s}`` for the given logs, plus a per-term error budget."""
    sigma, t = s.real, s.imag
    hi, lo = logs
    mag = np.exp(-sigma * hi)
    if weights is not None:
        mag = mag * weights
    phase = _reduced_phase(t, hi, lo)
    re = mag * np.cos(phase)
    im = -mag * np.sin(phase)
    err = np.abs(mag) * (2.5 * abs(t) * _EPS_LD + (64 + abs(sigma) * hi) * _EPS)
    return re, im, err


def dirichlet_sum(s: complex, coeffs=None, n_max: int | None = None) -> complex:
    """``sum_{n=1}^{N} a_n n^{-s}``.

    ``coeffs`` holds ``a_1..a_N``; when omitted all coefficients are 1 and
    ``n_max`` gives N.
    """
    value, _ = _dirichlet_sum_with_error(complex(s), coeffs, n_max)
    return value


def _dirichlet_sum_with_error(s, coeffs=None, n_max=None):
    if coeffs is not None:
        weights = np.asarray(coeffs, dtype=np.float64)
        n = weights.size
    else:
        weights = None
        n = int(n_max)
    if n <= 0:
        return 0j, 0.0
    re, im, err = _terms(s, _logs(n), weights)
    value = complex(math.fsum(re), math.fsum(im))
    return value, math.fsum(err) + 2 * _EPS * abs(value)


def _pochhammer_abs_terms(s, N):
    """Euler-Maclaurin correction terms T_1..T_{m+1} at cutoff N."""
    out = []
    poch = s  # s (s+1) ... (s + 2k - 2)
    Npow = N ** (-s - 1)  # N^{-s-2k+1} for k = 1
    fact = 2.0  # (2k)!
    for k in range(1, _EM_TERMS + 2):
        out.append(_BERNOULLI[k - 1] / fact * poch * Npow)
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        Npow = Npow / (N * N)
        fact = fact * (2 * k + 1) * (2 * k + 2)
    return out


def _em_truncation_bound(s, N):
    corr = _pochhammer_abs_terms(s, N)
    m = _EM_TERMS
    return abs(s + 2 * m + 1) / (s.real + 2 * m + 1) * abs(corr[m])


def zeta_with_error(s: complex, abs_err: float = 1e-10) -> tuple[complex, float]:
    """Euler-Maclaurin zeta(s) together with its certified error bound.

    The main sum runs to ``N - 1`` with ``N = max(ceil(2|t|), 64)``; the
    correction uses Bernoulli numbers through B_8, and the remainder is
    bounded by ``|s+9| / (sigma+9)`` times the first omitted term.  The
    rounding budget covers the phase reduction and the final
    correctly-rounded sums.  N is doubled (at most four times) until the
    total bound fits ``abs_err``.
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    if not (math.isfinite(sigma) and math.isfinite(t)):
        raise DomainError(f"s must be finite, got {s}")
    if sigma < SIGMA_MIN:
        raise DomainError(f"sigma must be at least {SIGMA_MIN}, got {sigma}")
    if not 0 <= t <= T_MAX:
        raise DomainError(f"t must lie in [0, {T_MAX:g}], got {t}")
    if abs_err < MIN_ABS_ERR:
        raise DomainError(f"abs_err must be at least {MIN_ABS_ERR}, got {abs_err}")
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    N = max(math.ceil(2 * t), 64)
    for _ in range(5):
        trunc = _em_truncation_bound(s, N)
        if trunc <= 0.25 * abs_err:
            break
        N *= 2
    main, round_err = _dirichlet_sum_with_error(s, n_max=N - 1)
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    corr = _pochhammer_abs_terms(s, N)[:_EM_TERMS]
    value = main + tail
    for c in corr:
        value += c
    err = trunc + round_err + 8 * _EPS * (abs(tail) + sum(abs(c) for c in corr))
    if err > abs_err:
        raise PrecisionError(
            f"cannot certify zeta({s}) to {abs_err:g}: error bound {err:.3g} "
            f"(truncation {trunc:.3g}, rounding {round_err:.3g})"
        )
    return value, err


def zeta_reference(s: complex, abs_err: float = 1e-10) -> complex:
    """zeta(s) within ``abs_err``, for sigma >= 0.4 and 0 <= t <= 1e5."""
    return zeta_with_error(s, abs_err)[0]


def _check_afe(sigma, t):
    if t < AFE_T_MIN:
        raise DomainError(f"the approximate functional equation needs t >= {AFE_T_MIN}, got {t}")
    if sigma < 0.5:
        raise DomainError(f"the approximate functional equation needs sigma >= 1/2, got {sigma}")


def afe_main_sum(s: complex) -> complex:
    """``sum_{1 <= n <= t} n^{-s}``."""
    s = complex(s)
    _check_afe(s.real, s.imag)
    return dirichlet_sum(s, n_max=math.floor(s.imag))


def afe_remainder_bound(sigma: float, t: float) -> float:
    """``1.755 t^{-sigma}``."""
    _check_afe(sigma, t)
    return AFE_REMAINDER_CONST * t ** (-sigma)


def mollifier(s: complex, X: int, tables) -> complex:
    """``M_X(s) = sum_{n <= X} mu(n) n^{-s}``."""
    X = int(X)
    if X > tables.limit:
        raise CapacityError(f"X={X} exceeds sieve limit {tables.limit}")
    if X < 1:
        return 0j
    return dirichlet_sum(complex(s), tables.mu[1 : X + 1])


def mollified_f(s: complex, X: int, tables, abs_err: float = 1e-10) -> complex:
    """``f_X(s) = zeta(s) M_X(s) - 1``."""
    return zeta_reference(s, abs_err) * mollifier(s, X, tables) - 1.0


def mollified_h(s: complex, X: int, tables, abs_err: float = 1e-10) -> complex:
    """``h_X(s) = 1 - f_X(s)^2``; vanishes at every zero of zeta."""
    f = mollified_f(s, X, tables, abs_err)
    return 1.0 - f * f


def mollified_h_factored(s: complex, X: int, tables, abs_err: float = 1e-10) -> complex:
    """The same function written as ``zeta M_X (2 - zeta M_X)``."""
    g = zeta_reference(s, abs_err) * mollifier(s, X, tables)
    return g * (2.0 - g)
