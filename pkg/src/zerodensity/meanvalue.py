"""Mean values of Dirichlet polynomials and moments of zeta on the critical line.

``exact_mean_square`` integrates ``|sum u_n n^{it}|^2`` over ``[T/2, T]`` in
closed form.  Writing ``z_n = exp(i T log n)`` and ``w_n = exp(i T/2 log n)``
turns every off-diagonal term into two complex products and one division,
so no trig call is made inside the O(N^2) loop.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import ArithTables
from .constants import M0, c_sigma, k_coeff
from .errors import CapacityError, DomainError
from .zeta import AFE_T_MIN, zeta_reference

__all__ = [
    "DirichletCoeffs",
    "mollifier_product_coeffs",
    "check_product_coeffs",
    "mv_rhs",
    "exact_mean_square",
    "lemma_meanv_rhs",
    "second_moment_bound",
    "fourth_moment_bound",
    "FOURTH_MOMENT_COEFFS",
    "empirical_moment",
]

MAX_PRODUCT = 10**7
MAX_EXACT_N = 10**5
_ROW_BLOCK = 256


@dataclass(frozen=True)
class DirichletCoeffs:
    """Real coefficients of ``n^{-s}`` for ``n = 1..N`` (``values[0]`` is n = 1)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise DomainError("coefficients must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(v)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


def mollifier_product_coeffs(X: int, T: int, tables: ArithTables) -> DirichletCoeffs:
    """Coefficients of ``(sum_{1<m<=T} m^{-s}) (sum_{n<=X} mu(n) n^{-s})``.

    Built by enumerating every pair ``(m, n)``, so ``c_k`` is the truncated
    divisor sum ``sum mu(n)`` over ``n | k, n <= X, 1 < k/n <= T``.
    """
    X, T = int(X), int(math.floor(T))
    if X < 1 or T < 2:
        raise DomainError(f"need X >= 1 and T >= 2, got X={X}, T={T}")
    if X * T > MAX_PRODUCT:
        raise CapacityError(f"X*T = {X * T} exceeds {MAX_PRODUCT}")
    if X > tables.limit:
        raise CapacityError(f"X={X} exceeds sieve limit {tables.limit}")
    c = np.zeros(X * T, dtype=np.int64)
    for n in range(1, X + 1):
        mu = int(tables.mu[n])
        if mu:
            # k = m n for m = 2..T, stored at index k - 1
            c[2 * n - 1 : n * T : n] += mu
    return DirichletCoeffs(c.astype(np.float64))


def check_product_coeffs(coeffs: DirichletCoeffs, X: int, T: int, tables: ArithTables) -> dict:
    """Test the closed-form descriptions of the product coefficients.

    Returns counts of failures for three properties:

    * ``small_k``: ``c_k = -mu(k)`` for ``1 < k <= min(X, T)`` (the missing
      ``m = 1`` term of the full Möbius sum);
    * ``divisor_sum``: ``c_k = sum_{e | k, e <= X} mu(e)`` for ``X < k <= T``;
    * ``divisor_bound``: ``|c_k| <= d(k)`` for ``X < k <= X T``.
    """
    c = coeffs.values
    X, T = int(X), int(T)
    lim = min(X, T)
    small = sum(1 for k in range(2, lim + 1) if c[k - 1] != -tables.mu[k])
    div_fail = 0
    for k in range(X + 1, min(T, c.size) + 1):
        a = sum(int(tables.mu[e]) for e in range(1, X + 1) if k % e == 0)
        if c[k - 1] != a:
            div_fail += 1
    top = min(c.size, tables.limit)
    ks = np.arange(X + 1, top + 1)
    bound_fail = int(np.count_nonzero(np.abs(c[X:top]) > tables.d[ks]))
    return {"small_k": small, "divisor_sum": div_fail, "divisor_bound": bound_fail}


def mv_rhs(coeffs: DirichletCoeffs, sigma: float, T: float) -> float:
    """``sum |u_n|^2 (T/2 + 2 pi m0 (n+1))`` with ``u_n = c_n n^{-sigma}``."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    n = np.arange(1, len(coeffs) + 1, dtype=np.float64)
    u2 = coeffs.values**2 * np.exp(-2 * sigma * np.log(n))
    return math.fsum(u2 * (0.5 * T + 2 * math.pi * M0 * (n + 1)))


def _offdiag_rows(rows, idx_logs, u, zr, zi, wr, wi):
    out = np.empty(len(rows))
    for j, m in enumerate(rows):
        dl = idx_logs[m + 1 :] - idx_logs[m]
        full = zi[m + 1 :] * zr[m] - zr[m + 1 :] * zi[m]
        half = wi[m + 1 :] * wr[m] - wr[m + 1 :] * wi[m]
        out[j] = u[m] * np.sum(u[m + 1 :] * (full - half) / dl)
    return out


def exact_mean_square(coeffs: DirichletCoeffs, sigma: float, T: float, workers: int = 1) -> float:
    """``int_{T/2}^{T} |sum_n u_n n^{it}|^2 dt`` with ``u_n = c_n n^{-sigma}``.

    Diagonal ``(T/2) sum u_n^2`` plus, for each pair ``m < n``,
    ``2 u_m u_n (sin(T L) - sin(T L / 2)) / L`` with ``L = log(n/m)``.
    Row sums are combined with :func:`math.fsum`, so the result does not
    depend on ``workers``.
    """
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    N = len(coeffs)
    if N > MAX_EXACT_N:
        raise CapacityError(f"exact integration is O(N^2); N={N} exceeds {MAX_EXACT_N}")
    nz = np.flatnonzero(coeffs.values)
    if nz.size == 0:
        return 0.0
    n = (nz + 1).astype(np.float64)
    logs = np.log(n)
    u = coeffs.values[nz] * np.exp(-sigma * logs)
    zr, zi = np.cos(T * logs), np.sin(T * logs)
    wr, wi = np.cos(0.5 * T * logs), np.sin(0.5 * T * logs)
    diag = 0.5 * T * math.fsum(u * u)
    blocks = [range(i, min(i + _ROW_BLOCK, nz.size - 1)) for i in range(0, nz.size - 1, _ROW_BLOCK)]

    def run(block):
        return _offdiag_rows(block, logs, u, zr, zi, wr, wi)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    off = math.fsum(x for p in parts for x in p)
    return diag + 2.0 * off


def lemma_meanv_rhs(sigma: float, T: float, X: float, X0: float) -> float:
    """Right-hand side of the mean-value lemma for the mollified product."""
    if not 0.6 - 1e-12 <= sigma <= 2 / 3 + 1e-12:
        raise DomainError(f"sigma must lie in [0.6, 2/3], got {sigma}")
    if X0 < 433 or X < X0:
        raise DomainError(f"need X >= X0 >= 433, got X={X}, X0={X0}")
    if not T > 1:
        raise DomainError(f"T must exceed 1, got {T}")
    XT = X * T
    first = 2 * math.pi * M0 * k_coeff(sigma, T) * XT ** (2 - 2 * sigma) * math.log(XT) ** 2
    second = (1.36 * (0.5 + 2 * math.pi * M0 / T) * c_sigma(sigma, X0)
              * T * X ** (1 - 2 * sigma) * math.log(X) ** 3)
    return first + second


def _check_moment_T(T):
    if T < AFE_T_MIN:
        raise DomainError(f"T must be at least {AFE_T_MIN}, got {T}")


def second_moment_bound(T: float) -> float:
    """Upper bound for ``int_T^{2T} |zeta(1/2+it)|^2 dt``."""
    _check_moment_T(T)
    L = math.log(T)
    return T * L + 26.48 * T + 8.27 * L + 17.20 + 8.27 / T


FOURTH_MOMENT_COEFFS = (24, 1022, 2, 1181.16, 19.86, 364.25, 177.07, 355.83, 181.83)


def fourth_moment_bound(T: float) -> float:
    """Upper bound for ``int_T^{2T} |zeta(1/2+it)|^4 dt``."""
    _check_moment_T(T)
    a = FOURTH_MOMENT_COEFFS
    L = math.log(T)
    terms = (
        a[0] * T**2 * math.log(8 * T) ** 3,
        a[1] * T**2 * math.log(2 * T) ** 2,
        a[2] * T * math.log(4 * T) ** 3,
        a[3] * T * L**2,
        a[4] * T * L,
        a[5] * T,
        a[6] * L,
        a[7],
        a[8] / T,
    )
    return math.fsum(terms)


def empirical_moment(k: int, T: float, step: float = 0.05, workers: int = 1) -> float:
    """Composite Simpson estimate of ``int_T^{2T} |zeta(1/2+it)|^k dt``.

    Nodes are ``T + j h`` with the even panel count ``ceil(T/step)`` rounded up.
    """
    if k not in (2, 4):
        raise DomainError(f"k must be 2 or 4, got {k}")
    if not 100 <= T <= 5000:
        raise DomainError(f"T must lie in [100, 5000], got {T}")
    if not 0 < step <= 0.1:
        raise DomainError(f"step must lie in (0, 0.1], got {step}")
    panels = math.ceil(T / step - 1e-9)
    panels += panels % 2
    h = T / panels
    nodes = [T + j * h for j in range(panels + 1)]

    def absval(chunk):
        return [abs(zeta_reference(complex(0.5, t), 1e-8)) for t in chunk]

    chunks = [nodes[i : i + 512] for i in range(0, len(nodes), 512)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            vals = [v for part in pool.map(absval, chunks) for v in part]
    else:
        vals = [v for c in chunks for v in absval(c)]
    f = np.asarray(vals) ** k
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return h / 3.0 * math.fsum(w * f)
