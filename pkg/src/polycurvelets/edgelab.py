"""Zonal cap signals and the detection of their boundary by curvelet coefficients.

The test signal ``f_{r,tau}(x) = (x_d - cos r)^tau`` on the cap ``C(e^d, r)``
(zero outside) is zonal, so only the coefficients ``<f, Y_0^{d,n}>`` survive
and every curvelet coefficient collapses to a one-dimensional sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from .curvelets import CurveletSpectrum, build_spectrum
from .geometry import rotation_to_pole
from .harmonics import pole_value
from .quadrature import cap_rule
from .specfun import jacobi, ln_gamma
from .windows import WindowPair

__all__ = [
    "ZonalTestSignal",
    "DetectionScan",
    "AsymptoticReport",
    "signal_eval",
    "signal_coeff_closed",
    "signal_coeff_oracle",
    "signal_coefficients",
    "gamma_constant",
    "coefficient_envelope",
    "rotated_curvelet_zonal_coeff",
    "curvelet_coefficient",
    "curvelet_coefficient_quadrature",
    "direction",
    "detection_scan",
    "limit_profile",
    "rescaled_coefficient",
    "asymptotic_report",
]


@dataclass(frozen=True)
class ZonalTestSignal:
    """``(x_d - cos r)^tau`` on the cap of radius ``r`` around ``e^d``."""

    d: int
    r: float
    tau: int = 0

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("need d >= 3")
        if not 0 < self.r < math.pi:
            raise ValueError("cap radius must lie in (0, pi)")
        if self.tau < 0 or int(self.tau) != self.tau:
            raise ValueError("tau must be a non-negative integer")

    @property
    def lam(self) -> float:
        return (self.d - 2) / 2


def signal_eval(sig: ZonalTestSignal, eta) -> np.ndarray:
    eta = np.asarray(eta, dtype=float)
    t = eta[..., -1]
    c = math.cos(sig.r)
    inside = t >= c
    out = np.where(inside, np.clip(t - c, 0.0, None) ** sig.tau, 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- coefficients


def _log_zonal_scale(d: int, n: int) -> float:
    """``log(c_d Y_0^{d,n}(e^d) / C_n^lam(1))``: maps ``int F C_n^lam w_lam`` to ``<f, Y_0^{d,n}>``."""
    lam = (d - 2) / 2
    return (
        ln_gamma(d / 2)
        - 0.5 * math.log(math.pi)
        - ln_gamma((d - 1) / 2)
        + math.log(pole_value(d, n))
        - (ln_gamma(n + 2 * lam) - ln_gamma(n + 1) - ln_gamma(2 * lam))
    )


@lru_cache(maxsize=16)
def _gauss_legendre_ld(M: int):
    """Gauss-Legendre nodes/weights in long double, Newton-refined from double guesses."""
    L = np.longdouble
    x = special.roots_legendre(M)[0].astype(L)

    def legendre_pair(x):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, M + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        return p1, M * (x * p1 - p0) / (x * x - 1)

    for _ in range(3):
        p, dp = legendre_pair(x)
        x = x - p / dp
    p, dp = legendre_pair(x)
    w = 2 / ((1 - x * x) * dp * dp)
    return x, w


@lru_cache(maxsize=64)
def _oracle_table(d: int, r: float, tau: int, nmax: int) -> np.ndarray:
    """``<f, Y_0^{d,n}>`` for ``n = 0..nmax`` by long-double Gauss quadrature.

    With ``t = 1 - s^2`` the weight ``(1 - t^2)^{lam - 1/2}`` becomes
    ``s^{2 lam - 1} (2 - s^2)^{lam - 1/2}``; the integrand
    ``2 s^{2 lam} (2 - s^2)^{lam - 1/2} (t - cos r)^tau C_n^lam(t)`` is then a
    polynomial in ``s`` for odd ``d`` and analytic on the interval otherwise.
    Extended precision absorbs the cancellation of the oscillatory sum.
    """
    L = np.longdouble
    lam = L(d - 2) / 2
    c = L(math.cos(r))
    M = nmax + tau + 40
    u, w = _gauss_legendre_ld(M)
    S = np.sqrt(1 - c)
    s = S * (u + 1) / 2
    ws = w * S / 2
    t = 1 - s * s
    g = 2 * s ** (2 * lam) * (2 - s * s) ** (lam - L(0.5)) * (t - c) ** tau * ws
    out = np.empty(nmax + 1)
    prev, cur = np.ones_like(t), 2 * lam * t
    out[0] = float(np.sum(g))
    if nmax >= 1:
        out[1] = float(np.sum(cur * g))
    for m in range(2, nmax + 1):
        prev, cur = cur, (2 * (m + lam - 1) * t * cur - (m + 2 * lam - 2) * prev) / m
        out[m] = float(np.sum(cur * g))
    return out * np.exp([_log_zonal_scale(d, n) for n in range(nmax + 1)])


def signal_coeff_oracle(sig: ZonalTestSignal, n: int) -> float:
    """``<f, Y_0^{d,n}>`` from the Gegenbauer-coefficient integral by 1-D quadrature."""
    if n < 0:
        raise ValueError("n must be >= 0")
    # tables are built in blocks of 64 degrees so neighbouring calls share one rule
    nmax = 64 * (n // 64 + 1)
    return float(_oracle_table(sig.d, float(sig.r), int(sig.tau), nmax)[n])


def _log_closed_prefactor(sig: ZonalTestSignal) -> float:
    lam, tau, r = sig.lam, sig.tau, sig.r
    return (
        2 * lam * math.log(2.0)
        + 0.5 * math.log(lam)
        + 2 * ln_gamma(lam)
        + ln_gamma(lam + 0.5)
        + ln_gamma(tau + 1)
        + (2 * lam + 2 * tau + 1) * math.log(math.sin(r))
        - (tau + 2) * math.log(2.0)
        - math.log(math.pi)
        - 1.5 * ln_gamma(2 * lam)
    )


def signal_coeff_closed(sig: ZonalTestSignal, n: int, k=None) -> float:
    """``<f_{r,tau}, Y_k^{d,n}>`` in closed form.

    Zero for ``k != 0``.  For ``n > tau`` the Jacobi representation

        const * sqrt(Gamma(n+2lam)(n+lam)) (n-tau-1)! / (sqrt(n!) Gamma(n+lam+1/2))
              * P_{n-tau-1}^{(a, a)}(cos r),   a = lam + tau + 1/2,

    is used, with the Gamma products formed in log space.  For ``n <= tau``
    the defining integral is evaluated directly.
    """
    if k is not None and any(k):
        return 0.0
    if n < 0:
        raise ValueError("n must be >= 0")
    if n <= sig.tau:
        return signal_coeff_oracle(sig, n)
    lam, tau = sig.lam, sig.tau
    logmag = (
        _log_closed_prefactor(sig)
        + 0.5 * (ln_gamma(n + 2 * lam) + math.log(n + lam) - ln_gamma(n + 1))
        + ln_gamma(n - tau)
        - ln_gamma(n + lam + 0.5)
    )
    a = lam + tau + 0.5
    return math.exp(logmag) * jacobi(n - tau - 1, a, a, math.cos(sig.r))


def signal_coefficients(sig: ZonalTestSignal, degrees) -> np.ndarray:
    return np.array([signal_coeff_closed(sig, int(n)) for n in degrees])


def gamma_constant(sig: ZonalTestSignal) -> float:
    """Amplitude ``gamma`` of ``<f, Y_0^{d,n}> ~ gamma n^{-tau-1} cos((n+lam) r - (lam+tau+1) pi/2)``."""
    lam, tau = sig.lam, sig.tau
    return math.exp(
        2 * lam * math.log(2.0)
        + 2 * ln_gamma(lam)
        + ln_gamma(lam + 0.5)
        + 0.5 * math.log(lam)
        + ln_gamma(tau + 1)
        + (lam + tau) * math.log(math.sin(sig.r))
        + (lam - 1) * math.log(2.0)
        - 1.5 * math.log(math.pi)
        - 1.5 * ln_gamma(2 * lam)
    )


def coefficient_envelope(sig: ZonalTestSignal, n) -> np.ndarray:
    """``gamma n^{-tau-1}``: the scale against which coefficient errors are measured."""
    n = np.maximum(np.asarray(n, dtype=float), 1.0)
    return gamma_constant(sig) * n ** (-sig.tau - 1.0)


# -------------------------------------------------------- curvelet coefficients


def _z(nu):
    nu = np.asarray(nu, dtype=float)
    return nu[..., -1] + 1j * nu[..., -2]


def _zonal_factors(s: CurveletSpectrum) -> np.ndarray:
    """``sqrt(2) kappa A_top = a_n / sqrt(dim)`` on the spectrum band."""
    return s.coeffs / np.sqrt(s.dims())


def rotated_curvelet_zonal_coeff(s: CurveletSpectrum, nu, n: int) -> float:
    """``<T(g_nu^{-1}) Psi_C^j, Y_0^{d,n}>``."""
    if s.j < 1:
        raise ValueError("needs j >= 1")
    hit = np.nonzero(s.degrees == n)[0]
    if not len(hit):
        return 0.0
    b = _zonal_factors(s)[hit[0]]
    return float(b * (_z(nu) ** n).real)


def curvelet_coefficient(s: CurveletSpectrum, sig: ZonalTestSignal, nu) -> np.ndarray:
    """``<f_{r,tau}, T(g_nu^{-1}) Psi_C^j>`` as a finite spectral sum; vectorized in ``nu``."""
    if s.j < 1:
        raise ValueError("needs j >= 1")
    fb = signal_coefficients(sig, s.degrees) * _zonal_factors(s)
    z = np.asarray(_z(nu), dtype=complex)
    out = np.zeros(z.shape)
    for n, c in zip(s.degrees, fb):
        out = out + c * (z ** int(n)).real
    return out if out.ndim else float(out)


def curvelet_coefficient_quadrature(s: CurveletSpectrum, sig: ZonalTestSignal, nu) -> float:
    """Same coefficient as a cap integral of ``f(x) Psi(g_nu x)`` (exact up to rounding for odd ``d``)."""
    from .curvelets import eval_curvelet

    rule = cap_rule(sig.d, sig.r, s.max_degree + sig.tau)
    g = rotation_to_pole(nu)
    x = rule.points
    return float(np.sum(rule.weights * signal_eval(sig, x) * eval_curvelet(s, x @ g.T)))


def direction(d: int, polar: float, rho: float = 1.0) -> np.ndarray:
    """``nu = (sqrt(1 - rho^2), 0, ..., rho sin(polar), rho cos(polar))``.

    ``Arg(nu_d + i nu_{d-1}) = polar`` and ``|nu_d + i nu_{d-1}| = rho``.
    """
    polar = np.asarray(polar, dtype=float)
    rho = np.asarray(rho, dtype=float)
    polar, rho = np.broadcast_arrays(polar, rho)
    nu = np.zeros(polar.shape + (d,))
    nu[..., 0] = np.sqrt(np.clip(1.0 - rho * rho, 0.0, None))
    nu[..., -2] = rho * np.sin(polar)
    nu[..., -1] = rho * np.cos(polar)
    return nu


@dataclass
class DetectionScan:
    """Coefficients on an ``(offset, |z|)`` grid; ``values[i, k]`` at ``offsets[i]``, ``zs[k]``."""

    d: int
    j: int
    r: float
    tau: int
    offsets: np.ndarray
    zs: np.ndarray
    values: np.ndarray

    def peak(self):
        i, k = np.unravel_index(np.argmax(np.abs(self.values)), self.values.shape)
        return float(self.offsets[i]), float(self.zs[k]), float(self.values[i, k])


def detection_scan(s: CurveletSpectrum, sig: ZonalTestSignal, offsets, zs) -> DetectionScan:
    """Coefficient at ``nu`` with ``Arg z = r + offset`` and ``|z|`` in ``zs``."""
    offsets = np.asarray(offsets, dtype=float)
    zs = np.asarray(zs, dtype=float)
    o, zz = np.meshgrid(offsets, zs, indexing="ij")
    z = zz * np.exp(1j * (sig.r + o))
    fb = signal_coefficients(sig, s.degrees) * _zonal_factors(s)
    vals = np.zeros(z.shape)
    for n, c in zip(s.degrees, fb):
        vals += c * (z ** int(n)).real
    return DetectionScan(sig.d, s.j, sig.r, sig.tau, offsets, zs, vals)


# ------------------------------------------------------------------ asymptotics


def _scale_exponent(sig: ZonalTestSignal) -> float:
    """``tau - (d-2)/4``: the coefficient peak decays like ``2^{-j * this}``."""
    return sig.tau - (sig.d - 2) / 4


def limit_profile(w: WindowPair, sig: ZonalTestSignal, u) -> np.ndarray:
    """``rho int_0^{2pi} kappa(t/pi) t^{(d-2)/4 - tau - 1} cos(u t / (2pi) + phi) dt``.

    The large-``j`` limit of :func:`rescaled_coefficient` at aligned
    orientation, with ``phi = (lam + tau + 1) pi/2 - lam r``.
    """
    lam = sig.lam
    phi = (lam + sig.tau + 1) * math.pi / 2 - lam * sig.r
    rho = (2 * math.pi) ** _scale_exponent(sig) * gamma_constant(sig) / math.sqrt(
        2 * math.gamma(sig.d / 2)
    )
    p = (sig.d - 2) / 4 - sig.tau - 1

    def one(uu):
        f = lambda t: w.kappa(t / math.pi) * t**p * math.cos(uu * t / (2 * math.pi) + phi)
        pts = [math.pi / 2, math.pi, 2 * math.pi]
        return integrate.quad(f, pts[0], pts[1], limit=200)[0] + integrate.quad(
            f, pts[1], pts[2], limit=200
        )[0]

    u = np.asarray(u, dtype=float)
    out = rho * np.vectorize(one)(u)
    return out if out.ndim else float(out)


def rescaled_coefficient(s: CurveletSpectrum, sig: ZonalTestSignal, u, rho: float = 1.0):
    """``2^{j(tau-(d-2)/4)} <f, T(g_nu^{-1}) Psi>`` at ``Arg z = r + u 2^{-j}``."""
    u = np.asarray(u, dtype=float)
    nu = direction(sig.d, sig.r + u / 2.0**s.j, rho)
    return 2.0 ** (s.j * _scale_exponent(sig)) * curvelet_coefficient(s, sig, nu)


def _sup_coefficient(s: CurveletSpectrum, sig: ZonalTestSignal, oversample: int = 16):
    """``sup_theta |C(theta)|`` at ``|z| = 1`` (the sup over all ``nu``).

    ``C(r e^{i theta})`` for ``|z| = r < 1`` is a harmonic-type average of
    the ``|z| = 1`` values, so the sup is attained on the unit circle.  A
    dense FFT grid brackets the maximum, which is then polished.
    """
    fb = signal_coefficients(sig, s.degrees) * _zonal_factors(s)
    M = oversample * (s.max_degree + 1)
    spec = np.zeros(M)
    spec[s.degrees] = fb
    vals = (M * np.fft.ifft(spec)).real
    k = int(np.argmax(np.abs(vals)))
    h = 2 * math.pi / M
    theta0 = k * h

    def neg(th):
        return -abs(float(np.sum(fb * np.cos(s.degrees * th))))

    res = optimize.minimize_scalar(neg, bounds=(theta0 - h, theta0 + h), method="bounded",
                                   options={"xatol": 1e-12})
    th = res.x if -res.fun >= abs(vals[k]) else theta0
    th = (th + math.pi) % (2 * math.pi) - math.pi
    return max(-res.fun, abs(vals[k])), abs(th)


@dataclass
class AsymptoticReport:
    d: int
    tau: int
    r: float
    window: str
    js: list[int]
    sup_values: list[float]
    sup_angles: list[float]
    sup_slope: float
    expected_slope: float
    slope_rel_error: float
    interval: tuple[float, float] | None
    interval_floor: float
    interval_sign: int
    interval_min_by_j: dict[int, float] = field(default_factory=dict)
    limit_residual_by_j: dict[int, float] = field(default_factory=dict)
    decay_j: int = 0
    decay_exponent: float = float("nan")
    q: float = float("nan")
    mismatch_monotone: bool = False
    mismatch_ratio: float = float("nan")
    mismatch_required: float = float("nan")

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        out["interval_min_by_j"] = {str(k): v for k, v in self.interval_min_by_j.items()}
        out["limit_residual_by_j"] = {str(k): v for k, v in self.limit_residual_by_j.items()}
        return out


def _certify_interval(curves: np.ndarray, u: np.ndarray, floor_frac: float):
    """Largest ``u``-window on which every curve keeps one sign and stays above a floor.

    ``curves`` has one row per scale.  The floor is ``floor_frac`` times the
    smallest per-scale peak magnitude.
    """
    peak = float(np.min(np.max(np.abs(curves), axis=1)))
    floor = floor_frac * peak
    best = None
    for sign in (1, -1):
        ok = np.all(sign * curves >= floor, axis=0)
        i = 0
        while i < len(ok):
            if ok[i]:
                k = i
                while k + 1 < len(ok) and ok[k + 1]:
                    k += 1
                if best is None or u[k] - u[i] > best[1] - best[0]:
                    best = (float(u[i]), float(u[k]), sign)
                i = k + 1
            else:
                i += 1
    return best, floor


def asymptotic_report(
    d: int,
    w: WindowPair,
    sig: ZonalTestSignal,
    j_range=range(4, 9),
    q: float | None = None,
    interval_js=None,
    floor_frac: float = 0.5,
    u_max: float = 12.0,
) -> AsymptoticReport:
    """Fitted detection exponents and an empirically certified interval ``I``.

    (a) slope of ``log2 sup_nu |coefficient|`` against ``j``;
    (b) a window ``I`` of ``u = 2^j * offset`` on which the aligned,
        rescaled coefficient keeps a sign and stays above
        ``floor_frac`` times its peak for every scale in ``interval_js``
        (default: the scales ``>= 6`` of ``j_range``);
    (c) the decay exponent of the rescaled coefficient in ``u`` at the
        largest scale, together with the orientation-mismatch check at
        offset 0 and scale 6.
    """
    js = list(j_range)
    if len(js) < 2 or min(js) < 3 or max(js) > 10:
        raise ValueError("need at least two scales inside [3, 10]")
    if sig.d != d:
        raise ValueError("signal dimension mismatch")
    sups, angs = [], []
    for j in js:
        v, th = _sup_coefficient(build_spectrum(d, j, w), sig)
        sups.append(v)
        angs.append(th)
    slope = float(np.polyfit(js, np.log2(sups), 1)[0])
    expected = -_scale_exponent(sig)
    rel = abs(slope - expected) / abs(expected) if expected else abs(slope)

    ijs = list(interval_js) if interval_js is not None else [j for j in js if j >= 6]
    if not ijs:
        ijs = [js[-1]]
    u = np.linspace(-u_max, u_max, 1201)
    curves = np.array([rescaled_coefficient(build_spectrum(d, j, w), sig, u) for j in ijs])
    best, floor = _certify_interval(curves, u, floor_frac)
    mins, resid = {}, {}
    if best is not None:
        sel = (u >= best[0]) & (u <= best[1])
        for j, c in zip(ijs, curves):
            mins[j] = float(np.min(best[2] * c[sel]))
    uu = np.linspace(-u_max, u_max, 97)
    lim = limit_profile(w, sig, uu)
    for j in ijs:
        rc = rescaled_coefficient(build_spectrum(d, j, w), sig, uu)
        resid[j] = float(np.max(np.abs(rc - lim)) / np.max(np.abs(lim)))

    # (c) decay in u at the top scale: envelope of |R(u)| over dyadic shells
    jt = max(js)
    st = build_spectrum(d, jt, w)
    shells = 2.0 ** np.arange(4, 7)
    env = []
    for a in shells:
        uu2 = np.linspace(a, 2 * a, 400)
        env.append(max(float(np.max(np.abs(rescaled_coefficient(st, sig, uu2)))),
                       float(np.max(np.abs(rescaled_coefficient(st, sig, -uu2))))))
    env = np.maximum(np.array(env), 1e-300)
    decay = float(-np.polyfit(np.log2(shells), np.log2(env), 1)[0])

    # orientation mismatch at offset 0, scale 6
    s6 = build_spectrum(d, 6, w)
    zs = np.linspace(0.9, 1.0, 10)
    mm = np.abs(curvelet_coefficient(s6, sig, direction(d, sig.r, zs)))
    monotone = bool(np.all(np.diff(mm) > 0))
    ratio = float(mm[-1] / mm[0]) if mm[0] > 0 else float("inf")

    return AsymptoticReport(
        d=d,
        tau=sig.tau,
        r=sig.r,
        window=w.kind,
        js=js,
        sup_values=[float(v) for v in sups],
        sup_angles=[float(a) for a in angs],
        sup_slope=slope,
        expected_slope=expected,
        slope_rel_error=float(rel),
        interval=None if best is None else (best[0], best[1]),
        interval_floor=float(floor),
        interval_sign=0 if best is None else int(best[2]),
        interval_min_by_j=mins,
        limit_residual_by_j=resid,
        decay_j=jt,
        decay_exponent=decay,
        q=float(w.smoothness_q if q is None else q),
        mismatch_monotone=monotone,
        mismatch_ratio=ratio,
        mismatch_required=0.9 ** (-(2 ** (6 - 2))),
    )
