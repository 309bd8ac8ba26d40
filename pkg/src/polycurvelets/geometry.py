"""Points, spherical coordinates and rotations on ``S^{d-1}``.

Points are plain ``numpy`` arrays whose last axis has length ``d``; rotations
are ``(d, d)`` arrays acting on column vectors.  Coordinates follow the
ordering in which the *first* Cartesian component carries ``sin(theta_1)``
and the last one is ``cos(theta_{d-1})``.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "basis_vector",
    "sph_to_cart",
    "cart_to_sph",
    "principal_arg",
    "rotation_to_pole",
    "rotation_in_equator",
    "base_rotation_g0",
    "plane_rotation",
    "geodesic_distance",
    "is_rotation",
    "random_sphere_points",
]


def basis_vector(d: int, i: int) -> np.ndarray:
    """Canonical basis vector ``e^i`` of ``R^d`` (1-based ``i``)."""
    e = np.zeros(d)
    e[i - 1] = 1.0
    return e


def sph_to_cart(angles) -> np.ndarray:
    """Map ``(theta_1, ..., theta_{d-1})`` (last axis) to points on ``S^{d-1}``."""
    angles = np.asarray(angles, dtype=float)
    m = angles.shape[-1]
    d = m + 1
    out = np.empty(angles.shape[:-1] + (d,))
    sin, cos = np.sin(angles), np.cos(angles)
    # tail[i] = prod_{l >= i} sin(theta_l), 1-based theta index
    tail = np.ones(angles.shape[:-1])
    out[..., d - 1] = cos[..., m - 1]
    for l in range(m, 1, -1):
        tail = tail * sin[..., l - 1]
        out[..., l - 1] = tail * cos[..., l - 2]
    out[..., 0] = tail * sin[..., 0]
    return out


def cart_to_sph(x) -> np.ndarray:
    """Inverse of :func:`sph_to_cart`, returning angles along the last axis.

    Angles are peeled off from the last coordinate downwards with ``arctan2``,
    so ``theta_1`` is ``atan2(x_1, x_2)`` and ``theta_m`` is
    ``atan2(|(x_1..x_m)|, x_{m+1})``.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    sq = np.cumsum(x * x, axis=-1)
    angles = np.empty(x.shape[:-1] + (d - 1,))
    angles[..., 0] = np.arctan2(x[..., 0], x[..., 1])
    for m in range(2, d):
        angles[..., m - 1] = np.arctan2(np.sqrt(sq[..., m - 1]), x[..., m])
    return angles


def principal_arg(re, im):
    """Principal argument in ``(-pi, pi]``; ``Arg(-|z|) = +pi``."""
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    if np.any((re == 0) & (im == 0)):
        raise ValueError("principal argument undefined at the origin")
    arg = np.arctan2(im, re)
    # atan2(-0.0, x<0) returns -pi
    arg = np.where(arg <= -math.pi, math.pi, arg)
    return arg if arg.ndim else float(arg)


def plane_rotation(d: int, i: int, j: int, angle: float) -> np.ndarray:
    """Positive rotation by ``angle`` in the ``(e^i, e^j)`` plane (1-based)."""
    g = np.eye(d)
    c, s = math.cos(angle), math.sin(angle)
    g[i - 1, i - 1] = c
    g[j - 1, j - 1] = c
    g[j - 1, i - 1] = s
    g[i - 1, j - 1] = -s
    return g


def rotation_to_pole(nu) -> np.ndarray:
    """Geodesic rotation ``g`` with ``g e^d = nu``.

    Acts in ``span{e^d, nu}`` and as the identity on its orthogonal
    complement.  For ``nu = -e^d`` the rotation by ``pi`` in the
    ``(e^{d-1}, e^d)`` plane is returned.
    """
    nu = np.asarray(nu, dtype=float)
    d = nu.shape[0]
    u = basis_vector(d, d)
    perp = nu.copy()
    perp[-1] = 0.0
    s = float(np.linalg.norm(perp))
    c = float(nu[-1])
    if s == 0.0:
        if c > 0:
            return np.eye(d)
        v = basis_vector(d, d - 1)
        s, c = 0.0, -1.0
    else:
        v = perp / s
        # renormalize so that (c, s) lies exactly on the unit circle
        rad = math.hypot(c, s)
        c, s = c / rad, s / rad
    return (
        np.eye(d)
        + (c - 1.0) * (np.outer(u, u) + np.outer(v, v))
        + s * (np.outer(v, u) - np.outer(u, v))
    )


def rotation_in_equator(nu_prime) -> np.ndarray:
    """Rotation ``h`` fixing ``e^d`` with ``h e^{d-1} = (nu_prime, 0)``."""
    nu_prime = np.asarray(nu_prime, dtype=float)
    m = nu_prime.shape[0]
    h = np.eye(m + 1)
    h[:m, :m] = rotation_to_pole(nu_prime)
    return h


def base_rotation_g0(d: int) -> np.ndarray:
    """Fixed rotation with ``g0 e^1 = e^{d-1}`` and ``g0 e^2 = e^d``.

    The cyclic shift of coordinates by two places; its sign is always +1.
    """
    if d < 3:
        raise ValueError("need d >= 3")
    g = np.zeros((d, d))
    for i in range(d):
        g[(i + d - 2) % d, i] = 1.0
    return g


def geodesic_distance(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.arccos(np.clip(np.sum(a * b, axis=-1), -1.0, 1.0))


def is_rotation(g, tol: float = 1e-12) -> bool:
    g = np.asarray(g, dtype=float)
    d = g.shape[0]
    return bool(
        np.max(np.abs(g.T @ g - np.eye(d))) <= tol and abs(np.linalg.det(g) - 1.0) <= tol
    )


def random_sphere_points(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    x = rng.standard_normal((count, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
