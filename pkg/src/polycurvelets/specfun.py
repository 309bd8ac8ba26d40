"""Scalar special functions and combinatorial constants.

Gamma-function products are always assembled as sums of ``ln_gamma`` terms
and exponentiated once, so that degrees far beyond 170 stay representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy import special

__all__ = [
    "HarmonicIndex",
    "ln_gamma",
    "gegenbauer",
    "gegenbauer_all",
    "gegenbauer_norm_sq",
    "log_gegenbauer_norm_sq",
    "jacobi",
    "harmonic_dim",
    "index_set",
    "log_normalization_A",
    "normalization_A",
    "log_top_normalization_A",
]

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True, order=True)
class HarmonicIndex:
    """Index ``(d, n, k)`` of the harmonic basis function ``Y_k^{d,n}``.

    ``k = (k_1, ..., k_{d-2})`` must satisfy
    ``n >= k_1 >= ... >= k_{d-3} >= |k_{d-2}|``.
    """

    d: int
    n: int
    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        object.__setattr__(self, "k", k)
        if self.d < 3:
            raise ValueError(f"dimension d must be >= 3, got {self.d}")
        if len(k) != self.d - 2:
            raise ValueError(f"k must have d-2={self.d - 2} entries, got {len(k)}")
        chain = (self.n,) + k[:-1] + (abs(k[-1]),)
        if self.n < 0 or any(a < b for a, b in zip(chain, chain[1:])) or chain[-1] < 0:
            raise ValueError(f"invalid harmonic index n={self.n}, k={k}")

    @property
    def chain(self) -> tuple[int, ...]:
        """``(k_0, k_1, ..., k_{d-2})`` with ``k_0 = n``."""
        return (self.n,) + self.k

    @classmethod
    def top(cls, d: int, n: int, sign: int = 1) -> "HarmonicIndex":
        """The extreme index ``(n, ..., n, ±n)``."""
        return cls(d, n, (n,) * (d - 3) + (sign * n,))

    @classmethod
    def zonal(cls, d: int, n: int) -> "HarmonicIndex":
        return cls(d, n, (0,) * (d - 2))


def ln_gamma(x):
    """Natural logarithm of the Gamma function for ``x > 0``.

    Backed by the C library ``lgamma`` (scalar) or ``scipy.special.gammaln``
    (arrays); both are accurate to a few ulps on the positive axis.
    """
    if np.ndim(x) == 0:
        x = float(x)
        if not x > 0:
            raise ValueError(f"ln_gamma requires x > 0, got {x}")
        return math.lgamma(x)
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0):
        raise ValueError("ln_gamma requires x > 0")
    return special.gammaln(x)


def gegenbauer(n: int, lam: float, t):
    """Gegenbauer polynomial ``C_n^lam(t)`` by the three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * lam * t
    for m in range(2, n + 1):
        prev, cur = cur, (2.0 * (m + lam - 1.0) * t * cur - (m + 2.0 * lam - 2.0) * prev) / m
    return cur if cur.ndim else float(cur)


def gegenbauer_all(nmax: int, lam: float, t) -> np.ndarray:
    """All ``C_m^lam(t)`` for ``m = 0..nmax``; shape ``(nmax + 1,) + t.shape``."""
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * lam * t
    for m in range(2, nmax + 1):
        out[m] = (2.0 * (m + lam - 1.0) * t * out[m - 1] - (m + 2.0 * lam - 2.0) * out[m - 2]) / m
    return out


def log_gegenbauer_norm_sq(n: int, lam: float) -> float:
    if n < 0 or not lam > -0.5 or lam == 0:
        raise ValueError("need n >= 0 and lam in (-1/2, 0) or lam > 0")
    if lam < 0:
        # Gamma(lam) < 0 here but only enters squared
        return (
            math.log(math.pi)
            + math.log(abs(special.gamma(n + 2 * lam)))
            - (2 * lam - 1) * math.log(2.0)
            - ln_gamma(n + 1)
            - math.log(n + lam)
            - 2 * math.log(abs(special.gamma(lam)))
        )
    return (
        math.log(math.pi)
        + ln_gamma(n + 2 * lam)
        - (2 * lam - 1) * math.log(2.0)
        - ln_gamma(n + 1)
        - math.log(n + lam)
        - 2 * ln_gamma(lam)
    )


def gegenbauer_norm_sq(n: int, lam: float) -> float:
    """``int_{-1}^{1} C_n^lam(t)^2 (1 - t^2)^(lam - 1/2) dt``."""
    val = log_gegenbauer_norm_sq(n, lam)
    if val > _LOG_MAX:
        raise OverflowError(f"Gegenbauer norm overflows for n={n}, lam={lam}")
    return math.exp(val)


def jacobi(n: int, alpha: float, beta: float, t):
    """Jacobi polynomial ``P_n^(alpha, beta)(t)`` by the three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev if prev.ndim else float(prev)
    ab = alpha + beta
    cur = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * t
    for m in range(2, n + 1):
        s = 2 * m + ab
        a1 = 2.0 * m * (m + ab) * (s - 2.0)
        a2 = (s - 1.0) * (alpha * alpha - beta * beta)
        a3 = (s - 2.0) * (s - 1.0) * s
        a4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * s
        prev, cur = cur, ((a2 + a3 * t) * cur - a4 * prev) / a1
    return cur if cur.ndim else float(cur)


def harmonic_dim(d: int, n: int) -> int:
    """Dimension of the degree-``n`` harmonic space on ``S^{d-1}`` (exact)."""
    if d < 3 or n < 0:
        raise ValueError("need d >= 3 and n >= 0")
    return (2 * n + d - 2) * math.comb(n + d - 3, n) // (d - 2)


def index_set(d: int, n: int) -> Iterator[HarmonicIndex]:
    """Enumerate ``I_n^d`` in lexicographic order of ``(k_1, ..., k_{d-2})``."""
    if d < 3 or n < 0:
        raise ValueError("need d >= 3 and n >= 0")

    def rec(prefix: tuple[int, ...], bound: int, left: int):
        if left == 1:
            for last in range(-bound, bound + 1):
                yield prefix + (last,)
            return
        for kk in range(bound + 1):
            yield from rec(prefix + (kk,), kk, left - 1)

    for k in rec((), n, d - 2):
        yield HarmonicIndex(d, n, k)


def log_normalization_A(idx: HarmonicIndex) -> float:
    """``log A_k^n`` for the orthonormal basis ``Y_k^{d,n}``."""
    d, kc = idx.d, idx.chain
    s = (d - 4) * (d - 2) * math.log(2.0) - ln_gamma(d / 2)
    half_log_pi = 0.5 * math.log(math.pi)
    for j in range(d - 2):
        kj, kn = kc[j], abs(kc[j + 1])
        lam = (d - j - 2) / 2 + kn
        s += (
            (2 * kn - j) * math.log(2.0)
            + ln_gamma(kj - kn + 1)
            + math.log(2 * kj + d - j - 2)
            + 2 * ln_gamma(lam)
            - half_log_pi
            - ln_gamma(kj + kn + d - j - 2)
        )
    return 0.5 * s


def normalization_A(idx: HarmonicIndex) -> float:
    val = log_normalization_A(idx)
    if val > _LOG_MAX:
        raise OverflowError(f"normalization constant overflows for {idx}")
    return math.exp(val)


def log_top_normalization_A(d: int, n: int) -> float:
    """``log A_{(n,...,n)}^n`` via the duplication-formula product form."""
    s = 0.5 * (2 - d) * math.log(2.0) - 0.5 * ln_gamma(d / 2)
    for j in range(d - 2):
        s += 0.5 * (
            math.log(2 * n + d - j - 2)
            + ln_gamma(n + (d - j - 2) / 2)
            - ln_gamma(n + (d - j - 1) / 2)
        )
    return s
