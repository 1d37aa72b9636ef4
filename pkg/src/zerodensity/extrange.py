"""Signed extended-range reals stored as a natural-log magnitude.

Bound values such as ``T**0.96 * log(T)**3.8`` at ``T = 10**308`` overflow a
double long before they become interesting.  :class:`ExtReal` keeps the sign
and ``log|x|`` instead, so products become sums and sums become log-sum-exp.

The magnitude is carried as a double-double pair ``ln_mag + ln_lo``.  Only
``ln_mag`` is part of the public contract; the low word keeps conversions
to and from ``float`` accurate to a few ulps across the whole double range.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from numbers import Real

from .errors import DomainError, ParseError

__all__ = [
    "ExtReal",
    "ZERO",
    "ONE",
    "xr_from_float",
    "xr_from_log",
    "xr_from_log10",
    "xr_mul",
    "xr_add",
    "xr_pow",
    "xr_cmp",
    "xr_parse",
]

# Cody-Waite split of ln 2: LN2_HI has 32 significant bits, so k * LN2_HI is
# exact for every binary exponent a double can carry.
LN2_HI = 0.6931471803691238
LN2_LO = 1.9082149292705877e-10
LN10_HI = 2.302585092994046
LN10_LO = -2.1707562233822494e-16
LN10 = LN10_HI

_CANCEL_RTOL = 1e-15
_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@dataclass(frozen=True, eq=False)
class ExtReal:
    """Extended-range real ``sign * exp(ln_mag)``.

    ``sign`` is -1, 0 or +1.  For ``sign == 0`` the magnitude is ignored and
    all zeros compare equal.
    """

    sign: int
    ln_mag: float = 0.0
    ln_lo: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "ln_mag", 0.0)
            object.__setattr__(self, "ln_lo", 0.0)
            return
        if not (math.isfinite(self.ln_mag) and math.isfinite(self.ln_lo)):
            raise DomainError("ln_mag must be finite for a nonzero ExtReal")
        hi, lo = _two_sum(self.ln_mag, self.ln_lo)
        object.__setattr__(self, "ln_mag", hi)
        object.__setattr__(self, "ln_lo", lo)

    @property
    def log(self) -> float:
        """Natural log of the magnitude (``-inf`` for zero)."""
        if self.sign == 0:
            return -math.inf
        return self.ln_mag + self.ln_lo

    @property
    def log10(self) -> float:
        if self.sign == 0:
            return -math.inf
        return self.ln_mag / LN10_HI + (self.ln_lo - self.ln_mag * LN10_LO / LN10_HI) / LN10_HI

    def is_zero(self) -> bool:
        return self.sign == 0

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.ln_mag > 709.8:
            raise OverflowError(f"{self} is outside the double range")
        if self.ln_mag < -746.0:
            return self.sign * 0.0
        k = round(self.ln_mag / LN2_HI)
        r = (self.ln_mag - k * LN2_HI) + (self.ln_lo - k * LN2_LO)
        return self.sign * math.ldexp(math.exp(r), k)

    def __bool__(self):
        return self.sign != 0

    def __hash__(self):
        if self.sign == 0:
            return hash(0)
        return hash((self.sign, self.ln_mag, self.ln_lo))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_cmp(self, other) == 0

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_cmp(self, other) < 0

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_cmp(self, other) <= 0

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_cmp(self, other) > 0

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_cmp(self, other) >= 0

    def __neg__(self):
        return ExtReal(-self.sign, self.ln_mag, self.ln_lo)

    def __abs__(self):
        return ExtReal(abs(self.sign), self.ln_mag, self.ln_lo)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("ExtReal division by zero")
        return xr_mul(self, ExtReal(other.sign, -other.ln_mag, -other.ln_lo))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return xr_add(other, -self)

    def __pow__(self, p):
        return xr_pow(self, p)

    def __str__(self):
        if self.sign == 0:
            return "0"
        return f"{'+' if self.sign > 0 else '-'}10^{self.log10:.12g}"


def _coerce(x):
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, Real):
        return xr_from_float(float(x))
    return NotImplemented


ZERO = ExtReal(0)
ONE = ExtReal(1, 0.0)


def xr_from_float(x: float) -> ExtReal:
    """Exact-as-possible conversion of a finite double."""
    if not math.isfinite(x):
        raise DomainError(f"cannot represent non-finite value {x!r}")
    if x == 0.0:
        return ZERO
    m, e = math.frexp(abs(x))
    hi, lo = _two_sum(e * LN2_HI, math.log(m))
    return ExtReal(1 if x > 0 else -1, hi, lo + e * LN2_LO)


def xr_from_log(ln_mag: float, sign: int = 1) -> ExtReal:
    """Build ``sign * exp(ln_mag)`` from a natural-log magnitude."""
    if sign == 0:
        return ZERO
    if not math.isfinite(ln_mag):
        raise DomainError(f"log magnitude must be finite, got {ln_mag!r}")
    return ExtReal(sign, float(ln_mag))


def xr_from_log10(l: float, sign: int = 1) -> ExtReal:
    """Build ``sign * 10**l``; ``ln_mag = l * ln 10``."""
    if sign not in (-1, 0, 1):
        raise DomainError(f"sign must be -1, 0 or +1, got {sign!r}")
    if not math.isfinite(l):
        raise DomainError(f"log10 exponent must be finite, got {l!r}")
    if sign == 0:
        return ZERO
    hi, lo = _two_prod(float(l), LN10_HI)
    return ExtReal(sign, hi, lo + l * LN10_LO)


def xr_mul(a: ExtReal, b: ExtReal) -> ExtReal:
    if a.sign == 0 or b.sign == 0:
        return ZERO
    hi, lo = _two_sum(a.ln_mag, b.ln_mag)
    return ExtReal(a.sign * b.sign, hi, lo + a.ln_lo + b.ln_lo)


def _mag_cmp(a, b):
    if a.ln_mag != b.ln_mag:
        return -1 if a.ln_mag < b.ln_mag else 1
    if a.ln_lo != b.ln_lo:
        return -1 if a.ln_lo < b.ln_lo else 1
    return 0


def xr_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Log-sum-exp addition with exact-cancellation detection."""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    big, small = (a, b) if _mag_cmp(a, b) >= 0 else (b, a)
    d = (small.ln_mag - big.ln_mag) + (small.ln_lo - big.ln_lo)
    if big.sign == small.sign:
        corr = math.log1p(math.exp(d))
        return ExtReal(big.sign, big.ln_mag, big.ln_lo + corr)
    if -d <= _CANCEL_RTOL * max(1.0, abs(big.ln_mag)):
        return ZERO
    corr = math.log(-math.expm1(d))
    return ExtReal(big.sign, big.ln_mag, big.ln_lo + corr)


def xr_pow(a: ExtReal, p: float) -> ExtReal:
    """``a ** p``; negative bases need an integral exponent."""
    if not math.isfinite(p):
        raise DomainError(f"exponent must be finite, got {p!r}")
    if p == 0:
        return ONE
    if a.sign == 0:
        if p < 0:
            raise ZeroDivisionError("zero raised to a negative power")
        return ZERO
    sign = 1
    if a.sign < 0:
        if float(p) != math.floor(p):
            raise DomainError("negative base with fractional exponent")
        sign = -1 if int(p) % 2 else 1
    hi, lo = _two_prod(a.ln_mag, float(p))
    return ExtReal(sign, hi, lo + a.ln_lo * p)


def xr_cmp(a: ExtReal, b: ExtReal) -> int:
    """Three-way comparison returning -1, 0 or 1."""
    if a.sign != b.sign:
        return -1 if a.sign < b.sign else 1
    if a.sign == 0:
        return 0
    c = _mag_cmp(a, b)
    return c if a.sign > 0 else -c


_TEXT_RE = re.compile(r"^\s*([+-]?)10\^([^\s]+)\s*$")


def xr_parse(text: str) -> ExtReal:
    """Parse ``"+10^308.9768"``, ``"-10^2"``, ``"0"`` or a plain decimal."""
    m = _TEXT_RE.match(text)
    if m:
        try:
            exponent = float(m.group(2))
        except ValueError:
            raise ParseError(f"bad exponent in {text!r}") from None
        return xr_from_log10(exponent, -1 if m.group(1) == "-" else 1)
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not an extended real: {text!r}") from None
    return xr_from_float(value)
