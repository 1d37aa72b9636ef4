"""Explicit zero-density bounds as comparable objects.

A :class:`BoundSpec` describes ``coef(sigma) T^a(sigma) (log T - shift)^b(sigma)``
plus an optional additive secondary term.  Values are :class:`ExtReal`, and
heights are passed as natural logs, so comparisons run far beyond 10^308.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .constants import LOG_H0, DensityParams, k_final
from .errors import BracketError, ConfigError, ConvergenceError, DomainError
from .extrange import ExtReal, LN10, xr_from_float, xr_from_log

__all__ = [
    "BoundSpec",
    "RegionMap",
    "carlson_t_exponent",
    "carlson_log_exponent",
    "carlson_bound",
    "carlson_spec",
    "simonic_spec",
    "kln_spec",
    "bohr_landau_spec",
    "builtin_bounds",
    "eval_bound",
    "crossover",
    "calibrate_simonic_k2",
    "region_map",
    "default_axes",
    "REQUIRED_COMPARATOR_KEYS",
]

REQUIRED_COMPARATOR_KEYS = ("kln_c1", "simonic_k2")
LOG_2H0 = LOG_H0 + math.log(2.0)
_VALIDITY_TOL = 1e-12


@dataclass(frozen=True)
class BoundSpec:
    id: str
    coefficient: Callable[[float], float]
    t_exponent: Callable[[float], float]
    log_exponent: Callable[[float], float]
    log_argument_shift: float = 0.0
    sigma_validity: tuple = (0.5, 1.0)
    t_floor: float = LOG_H0
    secondary: Callable[[float, float], ExtReal] | None = field(default=None, compare=False)
    notes: tuple = ()

    def valid_at(self, sigma: float, logT: float) -> bool:
        lo, hi = self.sigma_validity
        return lo - _VALIDITY_TOL <= sigma <= hi + _VALIDITY_TOL and logT >= self.t_floor - 1e-9


def carlson_t_exponent(sigma: float) -> float:
    return 4 * sigma * (1 - sigma)


def carlson_log_exponent(sigma: float, variant: str = "theorem") -> float:
    """``5 - 2 sigma`` as stated in the theorem, or 4 for the final-display variant."""
    if variant == "theorem":
        return 5 - 2 * sigma
    if variant == "section5":
        return 4.0
    raise DomainError(f"log exponent variant must be 'theorem' or 'section5', got {variant!r}")


def _shape(coef: float, t_exp: float, log_exp: float, logT: float, shift: float = 0.0) -> ExtReal:
    if coef <= 0:
        raise DomainError(f"bound coefficient must be positive, got {coef}")
    arg = logT - shift
    if arg <= 0:
        raise DomainError("log factor argument must be positive")
    return xr_from_log(math.log(coef) + t_exp * logT + log_exp * math.log(arg))


def carlson_bound(params: DensityParams, logT: float, log_exponent: str = "theorem",
                  k_value: float | None = None, arg_term: str = "decaying") -> ExtReal:
    """``K(sigma, T0) T^{4 sigma (1-sigma)} (log T)^{5 - 2 sigma}`` in extended range.

    ``k_value`` replaces the pipeline constant (e.g. with a tabulated value).
    """
    if logT < params.log_T0 - 1e-12:
        raise DomainError(f"T must be at least T0: log T = {logT} < log T0 = {params.log_T0}")
    k = k_final(params, arg_term).k_final if k_value is None else k_value
    s = params.sigma
    return _shape(k, carlson_t_exponent(s), carlson_log_exponent(s, log_exponent), logT)


def carlson_spec(log_T0: float = LOG_H0, log_exponent: str = "theorem", k_value: float | None = None,
                 allow_extended: bool = False, arg_term: str = "decaying") -> BoundSpec:
    """Carlson-type bound with the pipeline constant at each sigma (or a fixed ``k_value``)."""
    carlson_log_exponent(0.6, log_exponent)

    @lru_cache(maxsize=None)
    def coef(sigma):
        if k_value is not None:
            return k_value
        return k_final(DensityParams(sigma, log_T0, allow_extended), arg_term).k_final

    notes = ("tabulated K",) if k_value is not None else ()
    return BoundSpec(
        id="carlson",
        coefficient=coef,
        t_exponent=carlson_t_exponent,
        log_exponent=lambda s: carlson_log_exponent(s, log_exponent),
        sigma_validity=(0.5, 1.0) if allow_extended else (0.6, 2 / 3),
        t_floor=log_T0,
        notes=notes,
    )


def simonic_spec(k2: float, calibrated: bool = False) -> BoundSpec:
    """``K2 / 2^{1-(sigma-1/2)/4} T^{1-(sigma-1/2)/4} log(T/2)`` for ``T >= 2 H0``."""
    if not k2 > 0:
        raise ConfigError(f"simonic_k2 must be positive, got {k2}")

    def t_exp(s):
        return 1 - (s - 0.5) / 4

    return BoundSpec(
        id="simonic",
        coefficient=lambda s: k2 / 2 ** t_exp(s),
        t_exponent=t_exp,
        log_exponent=lambda s: 1.0,
        log_argument_shift=math.log(2.0),
        sigma_validity=(0.5, 1.0),
        t_floor=LOG_2H0,
        notes=("calibrated K2",) if calibrated else (),
    )


def kln_spec(c1: float, c2: float = 0.0) -> BoundSpec:
    """``C1 T^{(8/3)(1-sigma)} (log T)^{5-2 sigma} + C2 (log T)^2``.

    Valid from sigma = 5/8, where the T-exponent drops to 1.
    """
    if not c1 > 0:
        raise ConfigError(f"kln_c1 must be positive, got {c1}")
    if c2 < 0:
        raise ConfigError(f"kln_c2 must be nonnegative, got {c2}")
    secondary = None
    if c2 > 0:
        def secondary(sigma, logT):
            return xr_from_log(math.log(c2) + 2 * math.log(logT))

    return BoundSpec(
        id="kln",
        coefficient=lambda s: c1,
        t_exponent=lambda s: 8 / 3 * (1 - s),
        log_exponent=lambda s: 5 - 2 * s,
        sigma_validity=(5 / 8, 1.0),
        t_floor=LOG_H0,
        secondary=secondary,
    )


def bohr_landau_spec(c: float, sigma_min: float = 0.51) -> BoundSpec:
    """``c T / (sigma - 1/2)``, kept away from sigma = 1/2 by ``sigma_min``."""
    if not c > 0:
        raise ConfigError(f"bohr_landau_c must be positive, got {c}")
    return BoundSpec(
        id="bohr_landau",
        coefficient=lambda s: c / (s - 0.5),
        t_exponent=lambda s: 1.0,
        log_exponent=lambda s: 0.0,
        sigma_validity=(sigma_min, 1.0),
        t_floor=LOG_H0,
    )


def builtin_bounds(config: Mapping, log_T0: float = LOG_H0, log_exponent: str = "theorem",
                   allow_extended: bool = False) -> list[BoundSpec]:
    """Carlson plus the configured comparators, ordered by id.

    Requires ``kln_c1`` and ``simonic_k2``; ``kln_c2`` defaults to 0 and
    ``bohr_landau_c`` is optional.
    """
    missing = [k for k in REQUIRED_COMPARATOR_KEYS if config.get(k) is None]
    if missing:
        raise ConfigError(f"missing comparator constants: {', '.join(missing)}")
    specs = [
        carlson_spec(log_T0, log_exponent, allow_extended=allow_extended),
        kln_spec(float(config["kln_c1"]), float(config.get("kln_c2") or 0.0)),
        simonic_spec(float(config["simonic_k2"]), bool(config.get("simonic_k2_calibrated", False))),
    ]
    if config.get("bohr_landau_c") is not None:
        specs.append(bohr_landau_spec(float(config["bohr_landau_c"])))
    return sorted(specs, key=lambda s: s.id)


def eval_bound(spec: BoundSpec, sigma: float, logT: float) -> ExtReal:
    """Value of ``spec`` at ``(sigma, T = exp(logT))``."""
    lo, hi = spec.sigma_validity
    if not lo - _VALIDITY_TOL <= sigma <= hi + _VALIDITY_TOL:
        raise DomainError(f"{spec.id}: sigma={sigma} outside validity [{lo}, {hi}]")
    if logT < spec.t_floor - 1e-9:
        raise DomainError(f"{spec.id}: log T = {logT} below floor {spec.t_floor}")
    value = _shape(spec.coefficient(sigma), spec.t_exponent(sigma), spec.log_exponent(sigma),
                   logT, spec.log_argument_shift)
    if spec.secondary is not None:
        value = value + spec.secondary(sigma, logT)
    return value


def crossover(a: BoundSpec, b: BoundSpec, sigma: float, logT_lo: float, logT_hi: float,
              rtol: float = 1e-9, max_iter: int = 200) -> float:
    """Height (as log T) where ``log a - log b`` changes sign, by bisection."""

    def gap(x):
        return eval_bound(a, sigma, x).log - eval_bound(b, sigma, x).log

    lo, hi = float(logT_lo), float(logT_hi)
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise BracketError(
            f"{a.id} vs {b.id} at sigma={sigma}: no sign change on log T in [{lo}, {hi}]"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * abs(mid):
            return mid
        g_mid = gap(mid)
        if g_mid == 0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not reach rtol={rtol} in {max_iter} iterations")


def calibrate_simonic_k2(sigma: float, k_carlson: float, log10_T_star: float,
                         log_T0: float = LOG_H0, log_exponent: str = "theorem") -> float:
    """The ``K2`` that makes the two bounds meet at ``T = 10^log10_T_star``.

    The comparator constant is not available numerically, so a value is
    reverse-engineered from a reported crossover height.
    """
    logT = log10_T_star * LN10
    params = DensityParams(sigma, log_T0)
    target = carlson_bound(params, logT, log_exponent, k_value=k_carlson).log
    shape = simonic_spec(1.0)
    unit = eval_bound(shape, sigma, logT).log
    return math.exp(target - unit)


@dataclass
class RegionMap:
    sigma_axis: list
    logT_axis: list
    bound_ids: list
    winner: list  # winner[i][j] is a bound id or "none"
    values: dict  # id -> 2-D list of ExtReal or None

    def rows(self):
        for i, s in enumerate(self.sigma_axis):
            for j, L in enumerate(self.logT_axis):
                row = {"sigma": s, "log10T": L / LN10, "winner": self.winner[i][j]}
                for bid in self.bound_ids:
                    v = self.values[bid][i][j]
                    row[bid] = "" if v is None else str(v)
                yield row


def default_axes(sigma_min=0.5, sigma_max=0.8, sigma_step=0.005,
                 log10T_min=12.48, log10T_max=400.0, log10T_step=0.5):
    """Grid axes; sigma values and log10 T values are generated from integer counts."""
    if sigma_step <= 0 or log10T_step <= 0:
        raise DomainError("grid steps must be positive")
    ns = int(math.floor((sigma_max - sigma_min) / sigma_step + 1e-9)) + 1
    nt = int(math.floor((log10T_max - log10T_min) / log10T_step + 1e-9)) + 1
    sigmas = [round(sigma_min + i * sigma_step, 12) for i in range(ns)]
    logTs = [(log10T_min + j * log10T_step) * LN10 for j in range(nt)]
    return sigmas, logTs


def region_map(sigma_axis: Sequence[float], logT_axis: Sequence[float],
               specs: Sequence[BoundSpec]) -> RegionMap:
    """Evaluate every valid bound per cell and record the smallest one.

    Ties go to the lexicographically smallest id.
    """
    if not sigma_axis or not logT_axis:
        raise DomainError("region map axes must be nonempty")
    ordered = sorted(specs, key=lambda s: s.id)
    ids = [s.id for s in ordered]
    values = {bid: [[None] * len(logT_axis) for _ in sigma_axis] for bid in ids}
    winner = [["none"] * len(logT_axis) for _ in sigma_axis]
    for i, sigma in enumerate(sigma_axis):
        for spec in ordered:
            if not spec.valid_at(sigma, math.inf):
                continue
            row = values[spec.id][i]
            for j, logT in enumerate(logT_axis):
                if spec.valid_at(sigma, logT):
                    row[j] = eval_bound(spec, sigma, logT)
        for j in range(len(logT_axis)):
            best = None
            for bid in ids:
                v = values[bid][i][j]
                if v is not None and (best is None or v < best[1]):
                    best = (bid, v)
            if best is not None:
                winner[i][j] = best[0]
    return RegionMap(list(sigma_axis), list(logT_axis), ids, winner, values)
