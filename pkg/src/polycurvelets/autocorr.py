"""Auto-correlation ``h -> <T(h) Psi_C^j, Psi_C^j>`` over rotations fixing ``e^d``.

Closed forms for ``d = 3`` (rotation by ``gamma`` in the ``(e^1, e^2)`` plane)
and ``d >= 4`` (dependence through ``t = <h e^{d-1}, e^{d-1}>`` only), plus a
quadrature oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curvelets import build_spectrum, eval_curvelet, spectral_norm_sq
from .geometry import plane_rotation
from .quadrature import QuadratureRule, product_rule
from .specfun import HarmonicIndex, gegenbauer, ln_gamma, log_normalization_A, log_top_normalization_A
from .windows import WindowPair

__all__ = [
    "AutocorrCurve",
    "autocorr_d3",
    "c_coefficient",
    "log_abs_c_sq",
    "autocorr_general",
    "autocorr_bruteforce",
    "rotation_for_t",
    "autocorr_curve",
]


@dataclass
class AutocorrCurve:
    """Samples of the auto-correlation at scale ``j``.

    ``arg`` holds ``gamma`` for ``d = 3`` and ``t`` otherwise; ``normalized``
    is ``closed_form / ||Psi||_2^2``.
    """

    d: int
    j: int
    arg: np.ndarray
    closed_form: np.ndarray
    brute_force: np.ndarray | None
    normalized: np.ndarray


def _band(j: int, w: WindowPair):
    s = build_spectrum(3, j, w)
    return s.degrees, s.kappa_sq()


def autocorr_d3(j: int, w: WindowPair, gamma):
    """``sum_n (2n+1) kappa^2 (cos^{2n}(gamma/2) + sin^{2n}(gamma/2))``."""
    gamma = np.asarray(gamma, dtype=float)
    if j == 0:
        return np.ones_like(gamma) if gamma.ndim else 1.0
    n, k2 = _band(j, w)
    c2 = np.cos(gamma / 2) ** 2
    s2 = np.sin(gamma / 2) ** 2
    out = np.zeros_like(gamma)
    for m, kk in zip(n, k2):
        out = out + (2 * m + 1) * kk * (c2**m + s2**m)
    return out if out.ndim else float(out)


def log_abs_c_sq(d: int, n: int, m: int) -> float:
    """``log |c(d, n, m)|^2``, assembled in log space."""
    if d < 4:
        raise ValueError("c(d, n, m) is defined for d >= 4")
    if m % 2 or not 0 <= m <= n:
        raise ValueError("need even m with 0 <= m <= n")
    kidx = HarmonicIndex(d, n, (m,) + (0,) * (d - 3))
    s = (
        log_normalization_A(kidx)
        + log_top_normalization_A(d, n)
        + 0.5 * math.log(math.pi)
        + ln_gamma(d / 2)
        + math.log(math.comb(n, m))
        + ln_gamma(m + d - 3)
        - (m + d - 4) * math.log(2.0)
        - math.log(n + (d - 2) / 2)
        - ln_gamma((d - 2) / 2)
        - ln_gamma((d - 3) / 2)
        - ln_gamma(m + (d - 2) / 2)
    )
    return 2.0 * s


def c_coefficient(d: int, n: int, m: int) -> complex:
    """``c(d, n, m)``; real with sign ``(-1)^{m/2}`` since ``m`` is even."""
    val = 0.5 * log_abs_c_sq(d, n, m)
    if val > math.log(np.finfo(float).max):
        raise OverflowError(f"c({d}, {n}, {m}) overflows")
    return complex((-1) ** (m // 2) * math.exp(val), 0.0)


def autocorr_general(d: int, j: int, w: WindowPair, t):
    """``2 sum_n dim kappa^2 sum_{m even} |c|^2 Gamma(d-3) m!/Gamma(m+d-3) C_m^{(d-3)/2}(t)``."""
    if d < 4:
        raise ValueError("use autocorr_d3 for d = 3")
    t = np.asarray(t, dtype=float)
    if j == 0:
        return np.ones_like(t) if t.ndim else 1.0
    s = build_spectrum(d, j, w)
    lam = (d - 3) / 2
    out = np.zeros_like(t)
    for n, dim, kk in zip(s.degrees, s.dims(), s.kappa_sq()):
        n = int(n)
        inner = np.zeros_like(t)
        for m in range(0, n + 1, 2):
            logk = ln_gamma(d - 3) + ln_gamma(m + 1) - ln_gamma(m + d - 3)
            inner = inner + math.exp(log_abs_c_sq(d, n, m) + logk) * gegenbauer(m, lam, t)
        out = out + 2.0 * dim * kk * inner
    return out if out.ndim else float(out)


def autocorr_bruteforce(d: int, j: int, w: WindowPair, h, rule: QuadratureRule | None = None) -> float:
    """``sum_i w_i Psi(h^T x_i) Psi(x_i)`` on a rule exact to ``2^{j+1}``."""
    s = build_spectrum(d, j, w)
    if rule is None:
        rule = product_rule(d, 2 ** (j + 1))
    elif rule.exact_degree < 2 ** (j + 1):
        raise ValueError("rule must be exact to degree 2^(j+1)")
    h = np.asarray(h, dtype=float)
    if h.shape == (d - 1, d - 1):
        full = np.eye(d)
        full[: d - 1, : d - 1] = h
        h = full
    x = rule.points
    return float(np.sum(rule.weights * eval_curvelet(s, x @ h) * eval_curvelet(s, x)))


def rotation_for_t(d: int, t: float) -> np.ndarray:
    """Deterministic ``h`` fixing ``e^d`` with ``<h e^{d-1}, e^{d-1}> = t`` (angle ``gamma`` for ``d = 3``)."""
    if d == 3:
        return plane_rotation(3, 1, 2, t)
    return plane_rotation(d, d - 2, d - 1, math.acos(max(-1.0, min(1.0, t))))


def autocorr_curve(d: int, j: int, w: WindowPair, samples: int, brute: bool = True) -> AutocorrCurve:
    """Closed form (and optionally brute force) on ``samples`` equispaced arguments."""
    if d == 3:
        arg = np.linspace(0.0, math.pi, samples)
        closed = np.atleast_1d(autocorr_d3(j, w, arg))
    else:
        arg = np.linspace(1.0, -1.0, samples)
        closed = np.atleast_1d(autocorr_general(d, j, w, arg))
    bf = None
    if brute:
        rule = product_rule(d, 2 ** (j + 1))
        bf = np.array([autocorr_bruteforce(d, j, w, rotation_for_t(d, a), rule) for a in arg])
    norm = spectral_norm_sq(build_spectrum(d, j, w))
    return AutocorrCurve(d, j, arg, closed, bf, closed / norm)
