import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from conftest import brute_index_count
from polycurvelets.specfun import (
    HarmonicIndex,
    gegenbauer,
    gegenbauer_all,
    gegenbauer_norm_sq,
    harmonic_dim,
    index_set,
    jacobi,
    ln_gamma,
    log_normalization_A,
    log_top_normalization_A,
    normalization_A,
)


def test_ln_gamma_values():
    assert ln_gamma(1.0) == 0.0
    assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert ln_gamma(171.5) > 700  # finite beyond the double range of Gamma
    with pytest.raises(ValueError):
        ln_gamma(0.0)


@given(st.integers(0, 40), st.floats(0.1, 5.0), st.floats(-1.0, 1.0))
def test_gegenbauer_matches_scipy(n, lam, t):
    ref = special.eval_gegenbauer(n, lam, t)
    assert gegenbauer(n, lam, t) == pytest.approx(ref, rel=1e-10, abs=1e-10 * max(1.0, abs(ref)))


def test_gegenbauer_small_cases():
    assert gegenbauer(2, 1.0, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert gegenbauer(2, 0.5, 0.3) == pytest.approx(-0.365, rel=1e-14)
    t = np.linspace(-1, 1, 7)
    table = gegenbauer_all(6, 1.5, t)
    for m in range(7):
        np.testing.assert_allclose(table[m], gegenbauer(m, 1.5, t), rtol=1e-14)


@pytest.mark.parametrize("n,lam", [(0, 1.0), (3, 0.5), (5, 1.5), (7, 2.0), (4, -0.25)])
def test_gegenbauer_norm_against_quadrature(n, lam):
    x, w = special.roots_gegenbauer(n + 5, lam)
    ref = float(np.sum(w * gegenbauer(n, lam, x) ** 2))
    assert gegenbauer_norm_sq(n, lam) == pytest.approx(ref, rel=1e-12)


def test_gegenbauer_norm_lowest():
    assert gegenbauer_norm_sq(0, 1.0) == pytest.approx(math.pi / 2, rel=1e-15)
    with pytest.raises(ValueError):
        gegenbauer_norm_sq(2, 0.0)


@given(st.integers(0, 30), st.floats(-0.4, 3.0), st.floats(-0.4, 3.0), st.floats(-1, 1))
def test_jacobi_matches_scipy(n, a, b, t):
    ref = special.eval_jacobi(n, a, b, t)
    assert jacobi(n, a, b, t) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, abs(ref)))


@pytest.mark.parametrize("d,n,dim", [(3, 0, 1), (3, 1, 3), (3, 5, 11), (4, 2, 9), (5, 1, 5), (5, 2, 14)])
def test_harmonic_dim(d, n, dim):
    assert harmonic_dim(d, n) == dim


@given(st.integers(3, 6), st.integers(0, 9))
@settings(max_examples=40)
def test_index_set_size_and_order(d, n):
    idx = list(index_set(d, n))
    assert len(idx) == harmonic_dim(d, n) == brute_index_count(d, n)
    assert idx == sorted(idx)
    assert len(set(idx)) == len(idx)


def test_index_validation():
    HarmonicIndex(4, 3, (2, -2))
    for bad in [(4, 3, (4, 0)), (4, 3, (1, 2)), (3, 2, (3,)), (4, 3, (1,))]:
        with pytest.raises(ValueError):
            HarmonicIndex(*bad)
    with pytest.raises(ValueError):
        HarmonicIndex(2, 0, ())


@pytest.mark.parametrize("d", [3, 4, 5])
def test_top_normalization_two_ways(d):
    for n in (0, 1, 7, 64, 256):
        a = log_normalization_A(HarmonicIndex.top(d, n))
        b = log_top_normalization_A(d, n)
        assert a == pytest.approx(b, abs=1e-12 * max(1.0, abs(a)))


def test_normalization_overflow_signalled():
    assert math.isfinite(normalization_A(HarmonicIndex.top(4, 50)))
    with pytest.raises(ValueError):
        HarmonicIndex.top(4, -1)
