import math

import numpy as np
import pytest
from scipy import integrate as sint

from polycurvelets.harmonics import eval_Y
from polycurvelets.quadrature import (
    cap_rule,
    exactness_report,
    integrate,
    product_rule,
    write_rule_csv,
)
from polycurvelets.specfun import index_set


@pytest.mark.parametrize("d,N", [(2, 5), (3, 0), (3, 7), (4, 6), (5, 4)])
def test_positive_and_normalized(d, N):
    rule = product_rule(d, N)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-13)
    np.testing.assert_allclose(np.linalg.norm(rule.points, axis=1), 1.0, atol=1e-15)


def test_simple_integrals():
    rule = product_rule(3, 4)
    assert integrate(rule, lambda x: np.full(len(x), 2.5)) == pytest.approx(2.5)
    assert integrate(rule, lambda x: x[:, 2]) == pytest.approx(0.0, abs=1e-15)
    ref = sint.quad(lambda th: math.cos(th) ** 2 * math.sin(th) / 2, 0, math.pi)[0]
    assert integrate(rule, lambda x: x[:, 2] ** 2) == pytest.approx(ref, abs=1e-15)
    assert integrate(rule, lambda x: x[:, 0] ** 2) == pytest.approx(1 / 3, abs=1e-15)


def test_circle_rule():
    rule = product_rule(2, 6)
    assert integrate(rule, lambda x: (x[:, 0] + 1j * x[:, 1]) ** 6) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("d,N", [(3, 32), (4, 16), (5, 8)])
def test_exactness_report(d, N):
    assert exactness_report(product_rule(d, N)) < 1e-12


@pytest.mark.parametrize("d,N", [(3, 10), (4, 6)])
def test_full_moments(d, N):
    rule = product_rule(d, N)
    for n in range(1, N + 1):
        for idx in index_set(d, n):
            assert abs(integrate(rule, eval_Y(idx, rule.points))) < 1e-13


def test_not_exact_beyond_degree():
    # sanity: the rule is tight, degree N + 1 moments need not vanish
    rule = product_rule(3, 4)
    vals = [abs(integrate(rule, eval_Y(idx, rule.points))) for idx in index_set(3, 6)]
    assert max(vals) > 1e-3


@pytest.mark.parametrize("d", [3, 4])
def test_point_count_scaling(d):
    for m in (d, d - 1):
        ratios = [len(product_rule(m, 2 ** (j + 1))) / 2 ** (j * (m - 1)) for j in range(2, 8)]
        assert max(ratios) / min(ratios) < 2.0


@pytest.mark.parametrize("d", [3, 4, 5])
def test_cap_rule(d):
    r = 1.1
    rule = cap_rule(d, r, 6)
    assert np.all(rule.points[:, -1] >= math.cos(r) - 1e-15)
    c = math.gamma(d / 2) / (math.sqrt(math.pi) * math.gamma((d - 1) / 2))
    for p in range(4):
        ref = c * sint.quad(lambda t: t**p * (1 - t * t) ** ((d - 3) / 2), math.cos(r), 1,
                            epsabs=1e-15, epsrel=1e-13)[0]
        assert integrate(rule, lambda x: x[:, -1] ** p) == pytest.approx(ref, rel=1e-12)
    # odd functions of the transverse coordinates integrate to zero
    assert abs(integrate(rule, lambda x: x[:, 0] * x[:, -1] ** 2)) < 1e-15


def test_csv_export(tmp_path):
    rule = product_rule(3, 3)
    path = tmp_path / "rule.csv"
    write_rule_csv(rule, path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (len(rule), 4)
    np.testing.assert_array_equal(data[:, 3], rule.weights)
    assert path.read_text().splitlines()[0] == "x1,x2,x3,weight"
