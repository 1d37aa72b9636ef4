"""Zeta-zero ordinate datasets and counting audits.

File format: UTF-8 text, one decimal ordinate per line, strictly ascending.
Lines starting with ``#`` are comments and blank lines are skipped.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, OrderError, ParseError

__all__ = [
    "ZeroDataset",
    "parse_zeros",
    "load_zeros",
    "serialize_zeros",
    "zero_count",
    "empirical_nsigma",
    "rvm_main_term",
    "rvm_audit",
    "RvmAudit",
    "CountBeyondDataWarning",
]


class CountBeyondDataWarning(UserWarning):
    """A count was requested above the last ordinate; it is only a lower bound."""


@dataclass(frozen=True)
class ZeroDataset:
    ordinates: np.ndarray

    def __len__(self):
        return self.ordinates.size

    @property
    def max_ordinate(self) -> float:
        return float(self.ordinates[-1]) if self.ordinates.size else 0.0


def parse_zeros(stream) -> ZeroDataset:
    """Parse text (a string or an iterable of lines) into a dataset."""
    lines: Iterable[str] = stream.splitlines() if isinstance(stream, str) else stream
    values = []
    prev = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            x = float(line)
        except ValueError:
            raise ParseError(f"not a decimal ordinate: {line!r}", lineno) from None
        if not math.isfinite(x) or x <= 0:
            raise ParseError(f"ordinate must be positive and finite, got {line!r}", lineno)
        if prev is not None and x <= prev:
            raise OrderError(f"ordinates not strictly ascending: {prev!r} then {x!r}", lineno)
        values.append(x)
        prev = x
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return ZeroDataset(arr)


def load_zeros(path) -> ZeroDataset:
    with open(path, encoding="utf-8") as fh:
        return parse_zeros(fh)


def serialize_zeros(ds: ZeroDataset) -> str:
    return "".join(f"{float(x)!r}\n" for x in ds.ordinates)


def zero_count(ds: ZeroDataset, T: float) -> int:
    """Number of ordinates ``<= T`` (an ordinate equal to T is counted)."""
    if T > ds.max_ordinate:
        warnings.warn(
            f"T={T} exceeds the last ordinate {ds.max_ordinate}; count is a lower bound",
            CountBeyondDataWarning,
            stacklevel=2,
        )
    return int(np.searchsorted(ds.ordinates, T, side="right"))


def empirical_nsigma(ds: ZeroDataset, sigma: float, T: float) -> int:
    """Dataset zeros with real part above sigma and ordinate in (0, T].

    Every zero in an ordinate-only dataset lies on the critical line, so this
    is 0 for any admissible sigma.
    """
    if sigma <= 0.5:
        raise DomainError(f"N(sigma, T) is defined here for sigma > 1/2, got {sigma}")
    return 0


def rvm_main_term(T: float) -> float:
    """``(T/2 pi) log(T/(2 pi e)) + 7/8``."""
    if T < 2:
        raise DomainError(f"T must be at least 2, got {T}")
    x = T / (2 * math.pi)
    return x * math.log(x / math.e) + 7 / 8


@dataclass
class RvmAudit:
    count: int
    max_deviation: float
    at_ordinate: float


def rvm_audit(ds: ZeroDataset) -> RvmAudit:
    """Largest ``|N(T) - main term|`` over the dataset.

    N jumps at each ordinate, so both one-sided values ``k - 1`` and ``k`` are
    compared at the k-th ordinate.
    """
    g = ds.ordinates
    if g.size == 0:
        return RvmAudit(0, 0.0, 0.0)
    x = g / (2 * math.pi)
    main = x * np.log(x / math.e) + 7 / 8
    k = np.arange(1, g.size + 1, dtype=np.float64)
    dev = np.maximum(np.abs(k - main), np.abs(k - 1 - main))
    i = int(np.argmax(dev))
    return RvmAudit(int(g.size), float(dev[i]), float(g[i]))
