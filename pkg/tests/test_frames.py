import math

import numpy as np
import pytest

from polycurvelets.curvelets import eval_rotated
from polycurvelets.frames import (
    ResourceError,
    analyze,
    atom_count,
    build_frame_grid,
    project_Lambda,
    spectral_admissibility_defect,
    synthesize,
)
from polycurvelets.geometry import random_sphere_points
from polycurvelets.harmonics import HarmonicCoefficients, zonal_coefficients
from polycurvelets.quadrature import product_rule
from polycurvelets.windows import make_window

W = make_window()


def test_scale_zero_grid(rng):
    g = build_frame_grid(3, 0, W)
    assert g.counts() == [1]
    atom = next(g.atoms())
    np.testing.assert_array_equal(atom.rotation, np.eye(3))
    assert atom.weight == 1.0
    c = analyze(lambda x: np.full(len(x), 2.0), g, product_rule(3, 2))
    assert c[0][0] == pytest.approx(2.0)


def test_counts():
    assert build_frame_grid(3, 3, W).counts() == [1, 75, 405, 2601]
    assert len(build_frame_grid(4, 2, W)) == 1 + 675 + 10125 == atom_count(4, 2)
    # growth per scale is 2^{(2d-3)} up to lower-order factors
    for d in (3, 4):
        r = [atom_count(d, j) / atom_count(d, j - 1) for j in range(4, 8)]
        np.testing.assert_allclose(r, 2 ** (2 * d - 3), rtol=0.35)


def test_resource_cap():
    with pytest.raises(ResourceError):
        build_frame_grid(4, 5, W, cap=10**5)


def test_atoms_match_grid(rng):
    g = build_frame_grid(3, 2, W)
    x = random_sphere_points(rng, 7, 3)
    atoms = list(g.atoms())
    assert len(atoms) == len(g)
    for a in atoms[1:200:17]:
        R = a.rotation
        np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-13)
        assert np.linalg.det(R) == pytest.approx(1.0)
        coeffs = [np.zeros(n) for n in g.counts()]
        coeffs[a.j][a.r * len(g.rules[a.j][1]) + a.s] = 1.0
        ref = math.sqrt(a.weight) * eval_rotated(g.spectra[a.j], R, x)
        np.testing.assert_allclose(synthesize(coeffs, g, x).real, ref, atol=1e-12)


def test_constant_function():
    g = build_frame_grid(3, 3, W)
    c = analyze(lambda x: np.ones(len(x)), g, product_rule(3, 16))
    assert c[0][0] == pytest.approx(1.0)
    for cj in c[1:]:
        assert np.max(np.abs(cj)) < 1e-13


def test_zero_coefficients(rng):
    g = build_frame_grid(4, 1, W)
    out = synthesize([np.zeros(n) for n in g.counts()], g, random_sphere_points(rng, 5, 4))
    np.testing.assert_array_equal(out, 0)
    with pytest.raises(ValueError):
        synthesize([np.zeros(3)], g, random_sphere_points(rng, 5, 4))


def test_synthesis_is_band_limited(rng):
    g = build_frame_grid(3, 2, W)
    coeffs = [rng.standard_normal(n) for n in g.counts()]
    rule = product_rule(3, 16)
    H = HarmonicCoefficients.from_function(lambda x: synthesize(coeffs, g, x), 3, 7, rule)
    e = H.degree_energy()
    # kappa(2) = 0, so the top degree 2^J is absent as well
    assert e[4:].max() < 1e-24 * e.sum()
    assert e[3] > 1e-6 * e.sum()


@pytest.mark.parametrize("d,J", [(3, 2), (3, 3), (4, 2)])
def test_parseval_and_reconstruction(rng, d, J):
    g = build_frame_grid(d, J, W)
    f = HarmonicCoefficients.random(rng, d, 2 ** (J - 1))
    rule = product_rule(d, 2 ** (J - 1) + 2**J)
    c = analyze(f, g, rule)
    energy = sum(float(np.sum(np.abs(cj) ** 2)) for cj in c)
    assert abs(energy - f.norm_sq()) / f.norm_sq() < 1e-12
    x = random_sphere_points(rng, 40, d)
    np.testing.assert_allclose(synthesize(c, g, x), f(x), atol=1e-11 * math.sqrt(f.norm_sq()))


def test_permutation_invariance(rng):
    # reordering atoms together with their coefficients leaves synthesis unchanged
    g = build_frame_grid(3, 2, W)
    coeffs = [rng.standard_normal(n) for n in g.counts()]
    x = random_sphere_points(rng, 10, 3)
    ref = synthesize(coeffs, g, x)
    perm = rng.permutation(g.counts()[2])
    g.poles[2], g.axes[2], g.weights[2] = g.poles[2][perm], g.axes[2][perm], g.weights[2][perm]
    coeffs[2] = coeffs[2][perm]
    np.testing.assert_allclose(synthesize(coeffs, g, x), ref, atol=1e-12)


@pytest.mark.parametrize("d,J", [(3, 2), (4, 2)])
def test_reconstruction_is_Lambda(rng, d, J):
    g = build_frame_grid(d, J, W)
    f = HarmonicCoefficients.random(rng, d, 2**J)
    c = analyze(f, g, product_rule(d, 2 ** (J + 1)))
    x = random_sphere_points(rng, 30, d)
    lam = project_Lambda(d, J, W, f)
    np.testing.assert_allclose(synthesize(c, g, x), lam(x), atol=1e-11)
    # degrees <= 2^{J-1} pass untouched, degree 2^J is removed
    assert lam.degree_energy()[: 2 ** (J - 1) + 1] == pytest.approx(f.degree_energy()[: 2 ** (J - 1) + 1])
    assert lam.degree_energy()[2**J] == 0


def test_Lambda_converges_for_smooth_signal():
    f = zonal_coefficients(np.exp, 3, 64)
    errs = []
    for J in range(2, 6):
        n = np.arange(65)
        errs.append(math.sqrt(f.scale_degrees(1.0 - W.phi(n / 2.0**J) ** 2).norm_sq()))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-11


def test_admissibility():
    for w in (make_window(), make_window("spline_q", 3)):
        assert spectral_admissibility_defect(3, w, 2**10) < 1e-13
