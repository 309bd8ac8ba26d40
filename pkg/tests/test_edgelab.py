import math

import numpy as np
import pytest
from scipy import integrate

from polycurvelets.curvelets import build_spectrum
from polycurvelets.edgelab import (
    ZonalTestSignal,
    coefficient_envelope,
    curvelet_coefficient,
    curvelet_coefficient_quadrature,
    detection_scan,
    direction,
    gamma_constant,
    limit_profile,
    rescaled_coefficient,
    signal_coeff_closed,
    signal_coeff_oracle,
    signal_eval,
)
from polycurvelets.windows import make_window

W = make_window()


def test_signal_eval():
    sig = ZonalTestSignal(3, math.pi / 3, 1)
    assert signal_eval(sig, [0, 0, 1.0]) == pytest.approx(0.5)
    assert signal_eval(sig, [1.0, 0, 0]) == 0.0
    assert signal_eval(ZonalTestSignal(3, math.pi / 3, 0), [0, 0.6, 0.8]) == 1.0
    with pytest.raises(ValueError):
        ZonalTestSignal(3, 0.0)
    with pytest.raises(ValueError):
        ZonalTestSignal(3, 1.0, -1)


@pytest.mark.parametrize("d,tau", [(3, 0), (3, 2), (4, 1), (5, 0)])
def test_mean_value(d, tau):
    r = 1.2
    sig = ZonalTestSignal(d, r, tau)
    cd = math.gamma(d / 2) / (math.sqrt(math.pi) * math.gamma((d - 1) / 2))
    ref = cd * integrate.quad(
        lambda t: (t - math.cos(r)) ** tau * (1 - t * t) ** ((d - 3) / 2), math.cos(r), 1, epsabs=1e-15
    )[0]
    assert signal_coeff_closed(sig, 0) == pytest.approx(ref, rel=1e-10)


def test_non_zonal_vanish():
    sig = ZonalTestSignal(4, 1.0, 1)
    assert signal_coeff_closed(sig, 5, (2, 0)) == 0.0
    assert signal_coeff_closed(sig, 5, (0, 0)) != 0.0


@pytest.mark.parametrize("d,tau,r", [(3, 0, 1.0), (3, 1, math.pi / 2), (4, 0, 0.7), (4, 1, 2.0), (5, 2, 1.3)])
def test_closed_form_vs_oracle(d, tau, r):
    sig = ZonalTestSignal(d, r, tau)
    for n in (1, 2, 3, 7, 20, 63, 150):
        err = abs(signal_coeff_closed(sig, n) - signal_coeff_oracle(sig, n))
        assert err <= 1e-11 * coefficient_envelope(sig, n)


def test_coefficient_asymptotics():
    sig = ZonalTestSignal(4, 1.0, 1)
    lam = sig.lam
    for n in (2000, 4000):
        model = gamma_constant(sig) * n ** -2.0 * math.cos((n + lam) * 1.0 - (lam + 2) * math.pi / 2)
        assert abs(signal_coeff_closed(sig, n) - model) < 3e-3 * coefficient_envelope(sig, n)


@pytest.mark.parametrize("d,tau", [(3, 0), (4, 1)])
def test_curvelet_coefficient_vs_quadrature(d, tau):
    sig = ZonalTestSignal(d, 1.0, tau)
    s = build_spectrum(d, 3, W)
    for polar, rho in [(1.0, 1.0), (0.4, 0.8), (2.5, 0.3)]:
        nu = direction(d, polar, rho)
        assert np.linalg.norm(nu) == pytest.approx(1.0)
        a = curvelet_coefficient(s, sig, nu)
        b = curvelet_coefficient_quadrature(s, sig, nu)
        assert abs(a - b) < 1e-12 * max(1.0, abs(a))


def test_mirror_symmetry():
    sig = ZonalTestSignal(4, 1.0, 0)
    s = build_spectrum(4, 5, W)
    th = np.linspace(0, math.pi, 17)
    np.testing.assert_allclose(
        curvelet_coefficient(s, sig, direction(4, th)), curvelet_coefficient(s, sig, direction(4, -th)), atol=1e-14
    )


@pytest.mark.parametrize("tau", [0, 1])
def test_peak_offset_shrinks(tau):
    sig = ZonalTestSignal(3, math.pi / 3, tau)
    offs = []
    for j in range(4, 9):
        sc = detection_scan(build_spectrum(3, j, W), sig, np.linspace(-0.5, 0.5, 2001), [0.95, 1.0])
        o, z, _ = sc.peak()
        assert z == 1.0
        offs.append(abs(o))
    assert all(b <= a for a, b in zip(offs, offs[1:]))
    assert max(o * 2**j for o, j in zip(offs, range(4, 9))) < 3


def test_smoother_edges_are_weaker():
    ratios = []
    for j in range(4, 9):
        s = build_spectrum(3, j, W)
        peaks = [abs(detection_scan(s, ZonalTestSignal(3, math.pi / 3, t), np.linspace(-0.5, 0.5, 2001), [1.0]).peak()[2])
                 for t in (0, 1)]
        ratios.append(peaks[0] / peaks[1])
    growth = np.diff(np.log2(ratios))
    np.testing.assert_allclose(growth, 1.0, atol=0.2)


def test_rescaled_approaches_limit():
    sig = ZonalTestSignal(3, math.pi / 3, 1)
    u = np.linspace(-8, 8, 33)
    lim = limit_profile(W, sig, u)
    res = [np.max(np.abs(rescaled_coefficient(build_spectrum(3, j, W), sig, u) - lim)) for j in (5, 6, 7)]
    assert res[2] < res[1] < res[0]
    assert res[2] < 0.05 * np.max(np.abs(lim))
