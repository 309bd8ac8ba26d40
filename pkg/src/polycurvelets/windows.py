"""Scale windows ``kappa(t) = sqrt(phi(t/2)^2 - phi(t)^2)``.

Both window kinds are described by a transition pair ``(rise, fall)`` on
``[0, 1]`` with ``rise**2 + fall**2 == 1``.  Then

* ``phi(t) = fall(2t - 1)`` on ``[1/2, 1]``,
* ``kappa(t) = rise(2t - 1)`` on ``[1/2, 1)`` and ``fall(t - 1)`` on ``[1, 2)``,

which makes the telescoping sum ``sum_j kappa(n / 2**(j-1))**2 == 1`` exact up
to rounding, and keeps the tails of ``kappa`` accurate in *relative* terms
(``rise`` is never formed as ``sqrt(1 - fall**2)``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "SMOOTH",
    "WindowPair",
    "NonvanishingReport",
    "make_window",
    "admissibility_defect",
    "nonvanishing_check",
]

#: smoothness grade of the C-infinity window
SMOOTH = math.inf

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 1)
    si = s[inside]
    out[inside] = np.exp(-1.0 / (si * (1.0 - si)))
    return out


def _gl_integral(a, b):
    """Vectorized 16-point Gauss-Legendre integral of the bump over [a, b]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[..., None] + half[..., None] * _GL_X
    return half * np.sum(_bump(nodes) * _GL_W, axis=-1)


class _BumpTransition:
    """Normalized integral of ``exp(-1/(x(1-x)))``.

    Cumulative integrals are tabulated on knots graded like ``x**2`` towards 0
    (panel log-variation below 1/2), and any evaluation adds the exact
    Gauss-Legendre integral from the nearest knot.  Symmetry of the integrand
    about 1/2 gives the upper half.
    """

    def __init__(self):
        knots = [1.0 / 700.0]
        while knots[-1] < 0.05:
            s = knots[-1]
            knots.append(s + 0.5 * s * s)
        knots = np.concatenate([knots[:-1], np.linspace(0.05, 0.5, 1801)])
        panels = _gl_integral(knots[:-1], knots[1:])
        self.knots = knots
        self.cum = np.concatenate([[0.0], np.cumsum(panels)])
        self.half_total = self.cum[-1]

    def _lower(self, x):
        """``int_0^x bump / (2 * half_total)`` for ``0 <= x <= 1/2``."""
        i = np.clip(np.searchsorted(self.knots, x, side="right") - 1, 0, len(self.knots) - 1)
        base = np.where(x < self.knots[0], 0.0, self.cum[i])
        start = np.where(x < self.knots[0], 0.0, self.knots[i])
        return (base + _gl_integral(start, x)) / (2.0 * self.half_total)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        lo = x <= 0.5
        out = np.empty_like(x)
        out[lo] = self._lower(x[lo])
        out[~lo] = 1.0 - self._lower(1.0 - x[~lo])
        return out

    def fall(self, x):
        return self.cdf(1.0 - np.asarray(x, dtype=float))

    def rise(self, x):
        b = self.cdf(x)
        # 1 - fall^2 = b (2 - b), formed without cancellation
        return np.sqrt(b * (2.0 - b))


@lru_cache(maxsize=None)
def _bump_transition() -> _BumpTransition:
    return _BumpTransition()


class _SplineTransition:
    """``fall = cos(pi/2 S)``, ``rise = sin(pi/2 S)`` with ``S`` the smoothstep.

    ``S(x) = x**(q+1) * sum_k binom(q+k, k) (1-x)**k`` is the minimal-degree
    polynomial rising from 0 to 1 with ``q`` vanishing derivatives at both ends.
    """

    def __init__(self, q: int):
        self.q = q
        self.coef = [math.comb(q + k, k) for k in range(q + 1)]

    def smoothstep(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        acc = np.zeros_like(x)
        for c in reversed(self.coef):
            acc = acc * (1.0 - x) + c
        return x ** (self.q + 1) * acc

    def fall(self, x):
        return np.cos(0.5 * math.pi * self.smoothstep(x))

    def rise(self, x):
        return np.sin(0.5 * math.pi * self.smoothstep(x))


@dataclass(frozen=True)
class WindowPair:
    """Cutoff ``phi`` and scale window ``kappa`` sharing one transition."""

    kind: str
    smoothness_q: float
    _transition: object = field(repr=False, compare=False)

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t <= 0.5, 1.0, 0.0)
        mid = (t > 0.5) & (t < 1.0)
        if np.any(mid):
            out[mid] = self._transition.fall(2.0 * t[mid] - 1.0)
        return out if out.ndim else float(out)

    def kappa(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        lo = (t > 0.5) & (t < 1.0)
        hi = (t >= 1.0) & (t < 2.0)
        if np.any(lo):
            out[lo] = self._transition.rise(2.0 * t[lo] - 1.0)
        if np.any(hi):
            out[hi] = self._transition.fall(t[hi] - 1.0)
        return out if out.ndim else float(out)


def make_window(kind: str = "smooth_bump", q: int = 3) -> WindowPair:
    """Build a window pair.

    Parameters
    ----------
    kind : {"smooth_bump", "spline_q"}
        ``smooth_bump`` is C-infinity; ``spline_q`` is ``C^q``.
    q : int
        Smoothness order of ``spline_q`` (ignored for ``smooth_bump``).
    """
    if kind == "smooth_bump":
        return WindowPair(kind, SMOOTH, _bump_transition())
    if kind == "spline_q":
        q = int(q)
        if q < 1:
            raise ValueError("spline_q needs q >= 1")
        return WindowPair(kind, q, _SplineTransition(q))
    raise ValueError(f"unknown window kind {kind!r}")


def admissibility_defect(w: WindowPair, N: int) -> float:
    """``max_{1<=n<=N} |sum_{j>=1} kappa(n / 2**(j-1))**2 - 1|``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=float)
    total = np.zeros_like(n)
    jmax = int(math.ceil(math.log2(N))) + 3
    for j in range(1, jmax + 1):
        total += w.kappa(n / 2.0 ** (j - 1)) ** 2
    return float(np.max(np.abs(total - 1.0)))


@dataclass
class NonvanishingReport:
    passed: bool
    t0: float
    sign: int
    inconclusive: bool
    q: int
    grid: int


def _central_difference(f: Callable, t: np.ndarray, q: int, h: np.ndarray):
    offsets = np.arange(q + 1) - q / 2.0
    coef = np.array([(-1) ** (q - i) * math.comb(q, i) for i in range(q + 1)], dtype=float)
    vals = f(t[:, None] + offsets[None, :] * h[:, None])
    est = vals @ coef / h**q
    noise = 64.0 * np.finfo(float).eps * (np.abs(vals) @ np.abs(coef)) / h**q
    return est, noise


def nonvanishing_check(w, q: int, grid: int = 2000, t_max: float = 2.0) -> NonvanishingReport:
    """Scan the sign of ``kappa^(q)`` to the right of 1/2.

    The ``q``-th derivative is estimated by central differences at two step
    sizes on ``grid`` points of ``(1/2, t_max)``.  ``t0`` is the largest grid
    point up to which the sign stays fixed and the estimate stays above the
    rounding noise.  ``w`` may be a :class:`WindowPair` or a bare callable.
    """
    f = w.kappa if isinstance(w, WindowPair) else w
    t = 0.5 + (t_max - 0.5) * np.arange(1, grid + 1) / (grid + 1)
    h = np.minimum(1e-3, 1.8 * (t - 0.5) / max(q, 1))
    est, noise = _central_difference(f, t, q, h)
    est2, noise2 = _central_difference(f, t, q, 0.5 * h)
    conclusive = (np.abs(est) > noise) & (np.abs(est2) > noise2) & (np.sign(est) == np.sign(est2))
    if not conclusive[0]:
        silent = np.all(est == 0) and np.all(est2 == 0)
        return NonvanishingReport(False, 0.5, 0, not silent, q, grid)
    sign = int(np.sign(est[0]))
    bad = ~conclusive | (np.sign(est) != sign)
    k = int(np.argmax(bad)) if np.any(bad) else grid
    t0 = float(t[k - 1]) if k < grid else float(t_max)
    return NonvanishingReport(True, t0, sign, False, q, grid)
