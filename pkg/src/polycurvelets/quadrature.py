"""Positive product quadrature on spheres.

Rules integrate against the rotation-invariant measure of total mass one.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .geometry import sph_to_cart

__all__ = [
    "QuadratureRule",
    "product_rule",
    "cap_rule",
    "integrate",
    "exactness_report",
    "write_rule_csv",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Points and positive weights on ``S^m`` exact up to ``exact_degree``."""

    sphere_dim: int
    exact_degree: int
    points: np.ndarray
    weights: np.ndarray
    construction: str = ""

    def __post_init__(self):
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def d(self) -> int:
        """Ambient dimension ``m + 1``."""
        return self.sphere_dim + 1

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=64)
def _gauss_gegenbauer(npts: int, lam: float):
    # Jacobi(a, a) with a = lam - 1/2 has the same nodes and weight function
    a = lam - 0.5
    t, w = special.roots_jacobi(npts, a, a)
    return t, w / np.sum(w)


@lru_cache(maxsize=32)
def _product_rule(d: int, N: int) -> QuadratureRule:
    m = d - 1
    n1 = N + 1
    theta1 = 2.0 * math.pi * np.arange(n1) / n1
    theta1 = np.where(theta1 > math.pi, theta1 - 2.0 * math.pi, theta1)
    axes = [theta1]
    wax = [np.full(n1, 1.0 / n1)]
    ng = (N + 2) // 2
    for k in range(2, m + 1):
        # theta_k carries sin^{k-1}: Gegenbauer weight with lam = (k - 1) / 2
        t, w = _gauss_gegenbauer(ng, (k - 1) / 2)
        axes.append(np.arccos(t))
        wax.append(w)
    grids = np.meshgrid(*axes, indexing="ij")
    angles = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*wax, indexing="ij")
    weights = np.ones(angles.shape[0])
    for g in wgrids:
        weights = weights * g.ravel()
    points = sph_to_cart(angles)
    desc = f"product rule on S^{m}: trapezoid({n1}) x Gauss-Gegenbauer({ng})^{m - 1}, exact degree {N}"
    return QuadratureRule(m, N, points, weights, desc)


def product_rule(d: int, N: int) -> QuadratureRule:
    """Tensor rule on ``S^{d-1}`` in spherical coordinates.

    Trapezoidal rule with ``N + 1`` nodes in ``theta_1`` and
    ``ceil((N + 1) / 2)``-point Gauss-Gegenbauer rules in every other angle.
    For ``d = 2`` only the trapezoidal factor remains (a rule on the circle).
    """
    if d < 2 or N < 0:
        raise ValueError("need d >= 2 and N >= 0")
    return _product_rule(int(d), int(N))


def cap_rule(d: int, r: float, N: int, extra: int = 24) -> QuadratureRule:
    """Rule for ``int_{C(e^d, r)} g d omega`` with ``g`` a polynomial of degree ``N``.

    The polar variable ``t = x_d`` runs over ``[cos r, 1]`` with a
    Gauss-Jacobi rule carrying the ``(1 - t)^{(d-3)/2}`` endpoint behaviour;
    each level set is a scaled copy of ``product_rule(d - 1, N)``.  Exact for
    odd ``d``; for even ``d`` the smooth factor ``(1 + t)^{(d-3)/2}`` is
    resolved by ``extra`` additional nodes.
    """
    if not 0 < r < math.pi:
        raise ValueError("cap radius must lie in (0, pi)")
    alpha = (d - 3) / 2
    nt = (N + 2) // 2 + (extra if d % 2 == 0 else 0)
    u, wu = special.roots_jacobi(nt, alpha, 0.0)
    c0 = math.cos(r)
    half = (1.0 - c0) / 2.0
    t = c0 + half * (1.0 + u)
    cd = math.exp(math.lgamma(d / 2) - 0.5 * math.log(math.pi) - math.lgamma((d - 1) / 2))
    wt = cd * half ** (alpha + 1.0) * wu * (1.0 + t) ** alpha
    inner = product_rule(d - 1, N)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    pts = np.concatenate(
        [np.column_stack([s[i] * inner.points, np.full(len(inner), t[i])]) for i in range(nt)]
    )
    wts = np.concatenate([wt[i] * inner.weights for i in range(nt)])
    desc = f"cap rule on C(e^{d}, {r:.6g}): Gauss-Jacobi({nt}) x [{inner.construction}]"
    return QuadratureRule(d - 1, N, pts, wts, desc)


def integrate(rule: QuadratureRule, f):
    """``sum_i w_i f(p_i)``; ``f`` is a vectorized callable or a value array."""
    vals = f(rule.points) if callable(f) else np.asarray(f)
    # numpy's pairwise summation is deterministic for a fixed layout
    return np.sum(rule.weights * vals)


def _sample_indices(d: int, n: int):
    from .specfun import index_set

    idx = list(index_set(d, n))
    picks = {0, len(idx) // 2, len(idx) - 1, len(idx) // 3}
    return [idx[i] for i in sorted(picks)]


def exactness_report(rule: QuadratureRule) -> float:
    """Largest moment / Gram error over a deterministic sample of harmonics.

    Moments ``int Y_k^{d,n}`` are checked for ``n <= exact_degree``; Gram
    entries ``<Y_k, Y_l> - delta`` for sampled indices of degree up to
    ``exact_degree // 2``.
    """
    from .harmonics import eval_Y

    d, N = rule.d, rule.exact_degree
    if d < 3:
        raise ValueError("exactness report needs a rule on S^{d-1} with d >= 3")
    err = 0.0
    for n in range(N + 1):
        for idx in _sample_indices(d, n):
            val = integrate(rule, eval_Y(idx, rule.points))
            err = max(err, abs(val - (1.0 if n == 0 else 0.0)))
    gram_idx = [idx for n in range(N // 2 + 1) for idx in _sample_indices(d, n)]
    Y = np.stack([eval_Y(idx, rule.points) for idx in gram_idx])
    G = (Y * rule.weights) @ Y.conj().T
    err = max(err, float(np.max(np.abs(G - np.eye(len(gram_idx))))))
    return err


def write_rule_csv(rule: QuadratureRule, path) -> None:
    """CSV with columns ``x1..xd, weight``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(rule.d)] + ["weight"])
        for p, w in zip(rule.points, rule.weights):
            writer.writerow([repr(float(v)) for v in p] + [repr(float(w))])
