"""Polynomial curvelets ``Psi_C^j`` and their diagnostics.

Every scale-``j`` curvelet reduces to the one-dimensional spectrum

    Psi_C^j(x) = sum_n a_n Re((x_d + i x_{d-1})^n),
    a_n = sqrt(2 dim H_n^d) kappa(n / 2^(j-1)) A_{(n,...,n)}^n,

so it depends on ``x`` only through ``z = x_d + i x_{d-1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .specfun import harmonic_dim, log_top_normalization_A
from .windows import WindowPair

__all__ = [
    "CurveletSpectrum",
    "build_spectrum",
    "eval_curvelet",
    "eval_rotated",
    "eval_polar_grid",
    "profile",
    "localization_ratio",
    "localization_grid_max",
    "norm_estimate",
    "spectral_norm_sq",
]

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class CurveletSpectrum:
    """Degrees ``n`` and coefficients ``a_n > 0`` of ``Psi_C^j`` (zero ``a_n`` dropped)."""

    d: int
    j: int
    window: WindowPair | None
    degrees: np.ndarray
    coeffs: np.ndarray

    @property
    def max_degree(self) -> int:
        return int(self.degrees[-1])

    def kappa_sq(self) -> np.ndarray:
        """``kappa(n / 2^(j-1))^2`` on ``degrees`` (1 for the constant curvelet)."""
        if self.j == 0:
            return np.ones(1)
        return self.window.kappa(self.degrees / 2.0 ** (self.j - 1)) ** 2

    def dims(self) -> np.ndarray:
        return np.array([harmonic_dim(self.d, int(n)) for n in self.degrees], dtype=float)


def build_spectrum(d: int, j: int, w: WindowPair) -> CurveletSpectrum:
    """Assemble ``a_n`` in the log domain; ``j = 0`` is the constant 1."""
    if d < 3:
        raise ValueError("curvelets need d >= 3")
    if j < 0:
        raise ValueError("scale j must be >= 0")
    if j == 0:
        return CurveletSpectrum(d, 0, w, np.array([0]), np.array([1.0]))
    lo = 2 ** (j - 2) if j >= 2 else 1
    n = np.arange(lo, 2**j + 1)
    kap = w.kappa(n / 2.0 ** (j - 1))
    keep = kap > 0
    n, kap = n[keep], kap[keep]
    loga = np.array(
        [
            0.5 * math.log(2.0 * harmonic_dim(d, int(m))) + log_top_normalization_A(d, int(m))
            for m in n
        ]
    ) + np.log(kap)
    if np.any(loga > _LOG_MAX):
        raise OverflowError(f"curvelet coefficients overflow at d={d}, j={j}")
    return CurveletSpectrum(d, j, w, n, np.exp(loga))


def _z_of(x):
    x = np.asarray(x, dtype=float)
    return x[..., -1] + 1j * x[..., -2]


def _power_sum(s: CurveletSpectrum, z, shift: int = 0):
    """``sum_n a_n z^(n - shift)`` by running multiplication over consecutive degrees."""
    z = np.asarray(z, dtype=complex)
    n0 = int(s.degrees[0]) - shift
    zp = z**n0 if n0 else np.ones_like(z)
    acc = np.zeros_like(z)
    prev = int(s.degrees[0])
    for m, a in zip(s.degrees, s.coeffs):
        m = int(m)
        for _ in range(m - prev):
            zp = zp * z
        prev = m
        acc = acc + a * zp
    return acc


def eval_curvelet(s: CurveletSpectrum, x) -> np.ndarray:
    """``Psi_C^j(x)`` for points along the last axis of ``x``."""
    if s.j == 0:
        x = np.asarray(x, dtype=float)
        out = np.ones(x.shape[:-1])
        return out if out.ndim else float(out)
    out = _power_sum(s, _z_of(x)).real
    return out if out.ndim else float(out)


def eval_rotated(s: CurveletSpectrum, g, x) -> np.ndarray:
    """``(T(g) Psi)(x) = Psi(g^T x)``."""
    x = np.asarray(x, dtype=float)
    return eval_curvelet(s, x @ np.asarray(g))


def eval_polar_grid(s: CurveletSpectrum, rho, n_angles: int) -> np.ndarray:
    """``Psi`` at ``z = rho e^{i 2 pi k / n_angles}``; shape ``(len(rho), n_angles)``.

    One inverse FFT per radius; ``n_angles`` must exceed the top degree.
    """
    if n_angles <= s.max_degree:
        raise ValueError("n_angles must exceed the top degree")
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    spec = np.zeros((len(rho), n_angles))
    with np.errstate(divide="ignore"):
        logr = np.log(rho)
    for m, a in zip(s.degrees, s.coeffs):
        spec[:, int(m)] = a * np.exp(int(m) * logr) if m else a
    return (n_angles * np.fft.ifft(spec, axis=1)).real


def profile(s: CurveletSpectrum, t, varphi, eta=None) -> np.ndarray:
    """``Psi`` at ``cos t e^d + sin t (cos varphi e^{d-1} + sin varphi (eta, 0, 0))``.

    ``eta`` is a unit vector of ``R^{d-2}`` and defaults to its last basis vector.
    """
    t = np.asarray(t, dtype=float)
    varphi = np.asarray(varphi, dtype=float)
    d = s.d
    if eta is None:
        eta = np.zeros(d - 2)
        eta[-1] = 1.0
    t, varphi = np.broadcast_arrays(t, varphi)
    x = np.zeros(t.shape + (d,))
    x[..., -1] = np.cos(t)
    x[..., -2] = np.sin(t) * np.cos(varphi)
    x[..., : d - 2] = (np.sin(t) * np.sin(varphi))[..., None] * np.asarray(eta, dtype=float)
    return eval_curvelet(s, x)


def localization_ratio(s: CurveletSpectrum, x, q: int) -> np.ndarray:
    """``|Psi(x)| (1 + 2^j |Arg z|)^q / (2^{j(3d-2)/4} |z|^{2^{j-2}})``.

    The ``|z|`` power is divided out term by term, so no underflow occurs
    for small ``|z|``.
    """
    if s.j < 1:
        raise ValueError("localization ratio needs j >= 1")
    z = _z_of(x)
    if np.any(z == 0):
        raise ValueError("localization ratio undefined where x_d = x_{d-1} = 0")
    p = 2.0 ** (s.j - 2)
    r = np.abs(z)
    theta = np.angle(z)
    # sum_n a_n r^{n - p} cos(n theta); n - p >= 0 on the support band
    scaled = np.zeros(r.shape)
    for m, a in zip(s.degrees, s.coeffs):
        scaled = scaled + a * r ** (m - p) * np.cos(m * theta)
    amp = 2.0 ** (s.j * (3 * s.d - 2) / 4)
    out = np.abs(scaled) * (1.0 + 2.0**s.j * np.abs(theta)) ** q / amp
    return out if out.ndim else float(out)


def localization_grid_max(s: CurveletSpectrum, q: int, grid: int = 100) -> float:
    """Largest ratio over a ``grid x grid`` midpoint profile grid ``(t, varphi) in (0, pi)^2``."""
    u = (np.arange(grid) + 0.5) * math.pi / grid
    t, ph = np.meshgrid(u, u, indexing="ij")
    x = np.zeros(t.shape + (s.d,))
    x[..., -1] = np.cos(t)
    x[..., -2] = np.sin(t) * np.cos(ph)
    x[..., -3] = np.sin(t) * np.sin(ph)
    return float(np.max(localization_ratio(s, x, q)))


def spectral_norm_sq(s: CurveletSpectrum) -> float:
    """``||Psi||_2^2 = sum_n dim H_n^d kappa(n / 2^(j-1))^2``."""
    return float(np.sum(s.dims() * s.kappa_sq()))


def _disk_rule(d: int, n_rho: int):
    # push-forward of the sphere measure onto z: (d-2)/(2 pi) (1-rho^2)^{(d-4)/2} rho drho dtheta
    alpha = (d - 4) / 2
    u, w = special.roots_jacobi(n_rho, alpha, 0.0)
    rho = (1.0 + u) / 2.0
    wr = (d - 2) * 0.5 ** (alpha + 1.0) * w * (1.0 + rho) ** alpha * rho
    return rho, wr


def norm_estimate(s: CurveletSpectrum, p: float, rule=None, oversample: int = 8) -> float:
    """``||Psi_C^j||_{L^p}`` with respect to the normalized surface measure.

    * ``p = 2``: exact, from the spectrum (or from ``rule`` if given).
    * ``p = inf``: maximum over a dense polar grid, equal to ``Psi(e^d)``
      up to grid resolution.
    * other ``p``: if ``rule`` is given, ``(sum w |Psi|^p)^(1/p)``; otherwise
      the sphere integral is reduced to the unit disk in ``z`` and evaluated
      with a Gauss-Jacobi rule in ``|z|`` times an ``oversample``-fold
      trapezoidal rule in ``Arg z``.  Approximate for non-even ``p``.
    """
    if rule is not None and p != math.inf:
        vals = np.abs(eval_curvelet(s, rule.points)) ** p
        return float(np.sum(rule.weights * vals) ** (1.0 / p))
    if p == 2:
        return math.sqrt(spectral_norm_sq(s))
    if s.j == 0:
        return 1.0
    nmax = s.max_degree
    n_ang = oversample * (nmax + 1)
    if p == math.inf:
        rho = np.linspace(0.0, 1.0, oversample * nmax + 1)
        return float(np.max(np.abs(eval_polar_grid(s, rho, n_ang))))
    if not p > 0:
        raise ValueError("p must be positive")
    rho, wr = _disk_rule(s.d, oversample * nmax // 2 + 64)
    vals = np.abs(eval_polar_grid(s, rho, n_ang)) ** p
    # rotation average: trapezoidal mean over the angle
    integral = float(np.sum(wr * vals.mean(axis=1)))
    return integral ** (1.0 / p)
