"""The constant pipeline behind the explicit Carlson bound.

Everything is evaluated from ``log T0`` rather than ``T0`` so that heights
like ``10**(10**5)`` need no special handling:

    C(sigma, X0) -> C1 -> C2 -> C3 -> K(sigma, T0)

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .extrange import ExtReal, LN10

__all__ = [
    "M0",
    "LOG_H0",
    "DensityParams",
    "ConstantBreakdown",
    "C1Breakdown",
    "TABLE1",
    "c_sigma",
    "c_sigma_log",
    "k_coeff",
    "k_coeff_sup",
    "c1",
    "c1_breakdown",
    "c2",
    "c2_b_term",
    "b_term_exact",
    "c3",
    "c3_divisor",
    "k_final",
    "k_limit",
    "ARG_TERM_MODES",
]

M0 = math.sqrt(1.0 + (2.0 / 3.0) * math.sqrt(6.0 / 5.0))
# Platt-Trudgian verification height H0 = 3e12
LOG_H0 = math.log(3.0) + 12 * math.log(10.0)
LOG_433 = math.log(433.0)

_SIGMA_TOL = 1e-12
# the contour-argument lemma constant and the log|h| lemma constant
ARG_LEMMA_CONST = 17.29
BETA_LEMMA_CONST = 0.05
ARG_TERM_DISPLAYED = 0.004
ARG_TERM_MODES = ("decaying", "displayed")

# (T0 as text, log10 T0, sigma, reference K)
TABLE1 = [
    ("3e12", math.log10(3e12), 0.60, 0.7756),
    ("3e12", math.log10(3e12), 0.66, 0.2781),
    ("1e20", 20.0, 0.60, 0.0686),
    ("1e20", 20.0, 0.65, 0.0963),
    ("1e50", 50.0, 0.61, 0.0597),
    ("1e50", 50.0, 0.65, 0.0453),
    ("1e70", 70.0, 0.62, 0.2447),
    ("1e70", 70.0, 0.66, 0.0253),
    ("1e200", 200.0, 0.62, 0.1414),
]


@dataclass(frozen=True)
class DensityParams:
    """The pair ``(sigma, log T0)``.

    ``sigma`` must lie in ``[0.6, 2/3]`` unless ``allow_extended`` is set, in
    which case ``[0.5, 1)`` is accepted.  ``log_T0`` may not drop below
    ``log(3e12)``.
    """

    sigma: float
    log_T0: float
    allow_extended: bool = False

    def __post_init__(self):
        s = self.sigma
        if not math.isfinite(s):
            raise DomainError(f"sigma must be finite, got {s!r}")
        if self.allow_extended:
            if not 0.5 <= s < 1.0:
                raise DomainError(f"sigma must lie in [0.5, 1) even with the range override, got {s}")
        elif not 0.6 - _SIGMA_TOL <= s <= 2 / 3 + _SIGMA_TOL:
            raise DomainError(
                f"sigma={s} is outside [0.6, 2/3]; pass the sigma-range override to go up to 1"
            )
        if not math.isfinite(self.log_T0) or self.log_T0 < LOG_H0 - 1e-12:
            raise DomainError(f"T0 must be at least 3e12 (log T0 >= {LOG_H0:.6f}), got log T0 = {self.log_T0}")

    @classmethod
    def from_log10(cls, sigma, log10_T0, allow_extended=False):
        return cls(sigma, log10_T0 * LN10, allow_extended)

    @property
    def log10_T0(self) -> float:
        return self.log_T0 / LN10


def _check_sigma_open(sigma):
    if not 0.5 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (0.5, 1), got {sigma}")


def c_sigma_log(sigma: float, log_X0: float) -> float:
    """``C(sigma, X0)`` from ``log X0``; usable for astronomically large X0."""
    _check_sigma_open(sigma)
    if log_X0 < LOG_433 - 1e-12:
        raise DomainError(f"X0 must be at least 433, got log X0 = {log_X0}")
    a = 2 * sigma - 1
    L = log_X0
    return sigma / (2 * a**4) * (a**3 + 3 * a**2 / L + 6 * a / L**2 + 6 / L**3)


def c_sigma(sigma: float, X0: float) -> float:
    """Coefficient of ``X^(1-2 sigma) log^3 X`` in the divisor-square tail bound."""
    if X0 < 433:
        raise DomainError(f"X0 must be at least 433, got {X0}")
    return c_sigma_log(sigma, math.log(X0))


def k_coeff(sigma: float, T) -> float:
    """Partial-summation coefficient ``K(sigma, T)``; increasing in T.

    ``T`` may be a float, an :class:`ExtReal` or ``math.inf``.
    """
    if not 0.5 <= sigma < 1.0:
        raise DomainError(f"sigma must lie in [0.5, 1), got {sigma}")
    if isinstance(T, ExtReal):
        if T.sign <= 0:
            raise DomainError("T must be positive")
        log_T = T.log
    else:
        if not T > 1:
            raise DomainError(f"T must exceed 1, got {T}")
        log_T = math.inf if math.isinf(T) else math.log(T)
    if log_T <= 0:
        raise DomainError("T must exceed 1")
    decay = math.exp(-(2 - 2 * sigma) * log_T)
    return 0.25 - (2 * sigma - 1) / (4 * (2 * sigma - 2)) * (1.0 - decay)


def k_coeff_sup(sigma: float) -> float:
    """Supremum of ``K(sigma, T)`` over T, its ``T -> inf`` limit."""
    return k_coeff(sigma, math.inf)


@dataclass
class C1Breakdown:
    log_x0: float
    x0_clamped: bool
    c_of_sigma: float
    k_sup: float
    divisor_term: float
    partial_sum_term: float
    value: float
    warnings: list = field(default_factory=list)


def c1_breakdown(params: DensityParams) -> C1Breakdown:
    """``C1(sigma, T0)`` with X0 = max(T0^(2 sigma-1), 433) and K at its supremum."""
    s, L = params.sigma, params.log_T0
    _check_sigma_open(s)
    warnings = []
    log_x0 = (2 * s - 1) * L
    clamped = log_x0 < LOG_433
    if clamped:
        warnings.append(
            f"X0 = T0^(2 sigma - 1) = {math.exp(log_x0):.6g} < 433; clamped to 433 for the divisor-square tail bound"
        )
        log_x0 = LOG_433
    cs = c_sigma_log(s, log_x0)
    ksup = k_coeff_sup(s)
    ll = math.log(L) / L
    inv_t0 = math.exp(-L)
    divisor_term = 1.36 * (0.5 + 2 * math.pi * M0 * inv_t0) * (2 * s - 1 + ll) ** 3 * cs
    partial_sum_term = 2 * math.pi * M0 * ksup / L * (2 * s + ll) ** 2
    return C1Breakdown(log_x0, clamped, cs, ksup, divisor_term, partial_sum_term,
                       divisor_term + partial_sum_term, warnings)


def c1(params: DensityParams) -> float:
    return c1_breakdown(params).value


def c2_b_term(params: DensityParams) -> float:
    """The O(1/T0) contribution of the AFE remainder to ``C2``, as displayed."""
    s, L = params.sigma, params.log_T0
    _check_sigma_open(s)
    return 166.34 / (2 * s - 1) * (1 - 2 ** (1 - 2 * s)) * math.exp(-L) / L**3


def b_term_exact(sigma: float, X: float, T: float) -> float:
    """The remainder integral before simplification.

    ``3.09 X^(2-2 sigma) (1-sigma)^-2 (2^(2 sigma-1) - 1) (2 sigma-1)^-1 T^(1-2 sigma)``;
    reported next to :func:`c2_b_term` for transparency only.
    """
    _check_sigma_open(sigma)
    return (3.09 * X ** (2 - 2 * sigma) / (1 - sigma) ** 2 * (2 ** (2 * sigma - 1) - 1)
            / (2 * sigma - 1) * T ** (1 - 2 * sigma))


def c2(params: DensityParams) -> float:
    return 2 * c1(params) + c2_b_term(params)


def c3_divisor(sigma: float) -> float:
    """``1 - 0.5^(4 sigma (1 - sigma))``, from summing over dyadic blocks."""
    return 1.0 - 0.5 ** (4 * sigma * (1 - sigma))


def c3(params: DensityParams) -> float:
    return c2(params) / c3_divisor(params.sigma)


def _arg_coefficient(log_T0, mode):
    if mode == "decaying":
        return ARG_LEMMA_CONST / (2 * math.pi * log_T0**2)
    if mode == "displayed":
        return ARG_TERM_DISPLAYED
    raise DomainError(f"arg_term must be one of {ARG_TERM_MODES}, got {mode!r}")


@dataclass
class ConstantBreakdown:
    sigma: float
    log_T0: float
    x0_used: float  # log X0 actually used
    c_of_sigma: float
    k_coeff_sup: float
    c1: float
    c2: float
    c2_b_term: float
    c3: float
    arg_term: float
    beta_term: float
    k_final: float
    arg_mode: str = "decaying"
    warnings: list = field(default_factory=list)

    def as_row(self) -> dict:
        return {
            "sigma": self.sigma,
            "log10_T0": self.log_T0 / LN10,
            "log_x0": self.x0_used,
            "c_of_sigma": self.c_of_sigma,
            "k_coeff_sup": self.k_coeff_sup,
            "c1": self.c1,
            "c2": self.c2,
            "c2_b_term": self.c2_b_term,
            "c3": self.c3,
            "arg_term": self.arg_term,
            "beta_term": self.beta_term,
            "k_final": self.k_final,
            "arg_mode": self.arg_mode,
            "warnings": list(self.warnings),
        }


def k_final(params: DensityParams, arg_term: str = "decaying") -> ConstantBreakdown:
    """Assemble ``K(sigma, T0)``.

    ``K = C3/(2 pi) + a(T0) (1.25 - sigma + 1/log T0) + 0.05/(4 pi log^2 T0)``
    where the argument-integral coefficient ``a(T0)`` is
    ``17.29/(2 pi log^2 T0)`` (``arg_term="decaying"``) or the rounded
    constant 0.004 (``arg_term="displayed"``).  The free ``1/log T`` is taken
    at ``T = T0``, its largest value.
    """
    s, L = params.sigma, params.log_T0
    b = c1_breakdown(params)
    bterm = c2_b_term(params)
    c2v = 2 * b.value + bterm
    c3v = c2v / c3_divisor(s)
    arg = _arg_coefficient(L, arg_term) * (1.25 - s + 1.0 / L)
    beta = BETA_LEMMA_CONST / (4 * math.pi * L**2)
    k = c3v / (2 * math.pi) + arg + beta
    return ConstantBreakdown(
        sigma=s,
        log_T0=L,
        x0_used=b.log_x0,
        c_of_sigma=b.c_of_sigma,
        k_coeff_sup=b.k_sup,
        c1=b.value,
        c2=c2v,
        c2_b_term=bterm,
        c3=c3v,
        arg_term=arg,
        beta_term=beta,
        k_final=k,
        arg_mode=arg_term,
        warnings=list(b.warnings),
    )


def k_limit(sigma: float) -> float:
    """Limit of ``K(sigma, T0)`` as ``T0 -> inf``."""
    if not 0.5 <= sigma < 1.0:
        raise DomainError(f"sigma must lie in [0.5, 1), got {sigma}")
    return 0.68 * sigma * (2 * sigma - 1) ** 2 / c3_divisor(sigma) / (2 * math.pi)
