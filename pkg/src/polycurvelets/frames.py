"""Curvelet frame grids, analysis, synthesis and the spectral projector ``Lambda_J``.

The atom at scale ``j`` and nodes ``(r, s)`` is

    sqrt(mu) * Psi_C^j(g^T x),   g = g_{eta_{j,r}} h_{eta'_{j,s}},  mu = omega_{j,r} omega'_{j,s},

where ``(eta, omega)`` is a rule on ``S^{d-1}`` and ``(eta', omega')`` a rule on
``S^{d-2}``, both exact to degree ``2^{j+1}``.  Since ``Psi_C^j`` depends only
on ``(x_{d-1}, x_d)``, an atom is fully described by the two columns
``g e^d = eta`` and ``g e^{d-1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curvelets import CurveletSpectrum, build_spectrum
from .geometry import basis_vector, rotation_in_equator, rotation_to_pole
from .harmonics import HarmonicCoefficients
from .quadrature import QuadratureRule, product_rule
from .windows import WindowPair

__all__ = [
    "ResourceError",
    "DEFAULT_ATOM_CAP",
    "FrameAtom",
    "FrameGrid",
    "build_frame_grid",
    "atom_count",
    "analyze",
    "synthesize",
    "spectral_admissibility_defect",
    "project_Lambda",
]

DEFAULT_ATOM_CAP = 10**6


class ResourceError(RuntimeError):
    """A requested construction exceeds a configured size cap."""


@dataclass(frozen=True)
class FrameAtom:
    j: int
    r: int
    s: int
    rotation: np.ndarray
    weight: float


@dataclass
class FrameGrid:
    """All atoms for scales ``0..J`` in canonical ``(j, r, s)`` order.

    Atom data are stored scale by scale as arrays: ``poles[j]`` holds
    ``g e^d`` and ``axes[j]`` holds ``g e^{d-1}`` for every pair ``(r, s)``,
    with ``s`` running fastest.
    """

    d: int
    J: int
    window: WindowPair
    spectra: list[CurveletSpectrum]
    poles: list[np.ndarray]
    axes: list[np.ndarray]
    weights: list[np.ndarray]
    rules: list[tuple[QuadratureRule | None, QuadratureRule | None]]

    def counts(self) -> list[int]:
        return [len(w) for w in self.weights]

    def __len__(self) -> int:
        return sum(self.counts())

    def atoms(self):
        """Iterate :class:`FrameAtom` objects (rotations built on demand)."""
        for j in range(self.J + 1):
            outer, inner = self.rules[j]
            ns = 1 if inner is None else len(inner)
            for idx in range(len(self.weights[j])):
                r, s = divmod(idx, ns)
                yield FrameAtom(j, r, s, self.rotation(j, idx), float(self.weights[j][idx]))

    def rotation(self, j: int, idx: int) -> np.ndarray:
        outer, inner = self.rules[j]
        if outer is None:
            return np.eye(self.d)
        r, s = divmod(idx, len(inner))
        return rotation_to_pole(outer.points[r]) @ rotation_in_equator(inner.points[s])


def atom_count(d: int, J: int) -> int:
    """``sum_j r_j s_j`` without building anything."""
    total = 1
    for j in range(1, J + 1):
        N = 2 ** (j + 1)
        r = (N + 1) * ((N + 2) // 2) ** (d - 2)
        s = (N + 1) * ((N + 2) // 2) ** (d - 3)
        total += r * s
    return total


def build_frame_grid(d: int, J: int, w: WindowPair, cap: int = DEFAULT_ATOM_CAP) -> FrameGrid:
    """Atoms for scales ``0..J``; raises :class:`ResourceError` above ``cap`` atoms."""
    if J < 0:
        raise ValueError("J must be >= 0")
    total = atom_count(d, J)
    if total > cap:
        raise ResourceError(f"frame with d={d}, J={J} has {total} atoms (cap {cap})")
    spectra, poles, axes, weights, rules = [], [], [], [], []
    # j = 0: single atom, eta = e^d, eta' = e^{d-1}, weight 1
    spectra.append(build_spectrum(d, 0, w))
    poles.append(basis_vector(d, d)[None, :])
    axes.append(basis_vector(d, d - 1)[None, :])
    weights.append(np.ones(1))
    rules.append((None, None))
    for j in range(1, J + 1):
        N = 2 ** (j + 1)
        outer = product_rule(d, N)
        inner = product_rule(d - 1, N)
        gs = np.stack([rotation_to_pole(eta) for eta in outer.points])
        # g e^{d-1} = g_eta (eta', 0)
        ax = np.einsum("rab,sb->rsa", gs[:, :, : d - 1], inner.points).reshape(-1, d)
        po = np.repeat(outer.points, len(inner), axis=0)
        wt = np.outer(outer.weights, inner.weights).ravel()
        spectra.append(build_spectrum(d, j, w))
        poles.append(po)
        axes.append(ax)
        weights.append(wt)
        rules.append((outer, inner))
    return FrameGrid(d, J, w, spectra, poles, axes, weights, rules)


def _atom_values(spec: CurveletSpectrum, poles, axes, x) -> np.ndarray:
    """``Psi(g^T x)`` for every atom (rows) and point (columns)."""
    if spec.j == 0:
        return np.ones((len(poles), len(x)))
    z = poles @ x.T + 1j * (axes @ x.T)
    n0 = int(spec.degrees[0])
    zp = z**n0
    acc = np.zeros(z.shape)
    prev = n0
    for m, a in zip(spec.degrees, spec.coeffs):
        m = int(m)
        for _ in range(m - prev):
            zp = zp * z
        prev = m
        acc += a * zp.real
    return acc


def _chunks(n: int, size: int):
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


def analyze(f, grid: FrameGrid, rule: QuadratureRule, chunk: int = 4096) -> list[np.ndarray]:
    """Frame coefficients ``sqrt(mu) <f, T(g) Psi_C^j>`` by quadrature.

    ``f`` is a vectorized callable, a :class:`HarmonicCoefficients` table
    (evaluated on the rule) or an array of values at ``rule.points``.
    The rule must be exact to ``deg f + 2^J`` for polynomial ``f``.
    Returns one complex array per scale in canonical ``(r, s)`` order.
    """
    if isinstance(f, HarmonicCoefficients):
        vals = f.evaluate(rule.points)
    elif callable(f):
        vals = np.asarray(f(rule.points))
    else:
        vals = np.asarray(f)
    wf = (rule.weights * vals).astype(complex)
    out = []
    for j in range(grid.J + 1):
        coeffs = np.empty(len(grid.weights[j]), dtype=complex)
        for sl in _chunks(len(coeffs), chunk):
            A = _atom_values(grid.spectra[j], grid.poles[j][sl], grid.axes[j][sl], rule.points)
            # Psi is real, so conj is not needed on the atom side
            coeffs[sl] = A @ wf
        out.append(np.sqrt(grid.weights[j]) * coeffs)
    return out


def synthesize(coeffs, grid: FrameGrid, x, chunk: int = 4096) -> np.ndarray:
    """``sum c_{j,r,s} sqrt(mu) Psi_C^j(g^T x)`` at points ``x``."""
    if len(coeffs) != grid.J + 1 or any(
        len(c) != n for c, n in zip(coeffs, grid.counts())
    ):
        raise ValueError("coefficient list does not match the frame grid")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.zeros(len(x), dtype=complex)
    for j in range(grid.J + 1):
        c = np.asarray(coeffs[j]) * np.sqrt(grid.weights[j])
        for sl in _chunks(len(c), chunk):
            A = _atom_values(grid.spectra[j], grid.poles[j][sl], grid.axes[j][sl], x)
            out += c[sl] @ A
    return out


def spectral_admissibility_defect(d: int, w: WindowPair, N: int) -> float:
    """``max_{0<=n<=N} |delta_{n,0} + sum_{j>=1} kappa(n / 2^(j-1))^2 - 1|``.

    The direction sum ``sum_k |zeta_k|^2`` equals 1 by construction and
    does not depend on ``d``.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    n = np.arange(N + 1, dtype=float)
    total = (n == 0).astype(float)
    jmax = int(math.ceil(math.log2(max(N, 1)))) + 3
    for j in range(1, jmax + 1):
        total += w.kappa(n / 2.0 ** (j - 1)) ** 2
    return float(np.max(np.abs(total - 1.0)))


def project_Lambda(d: int, J: int, w: WindowPair, f_coeffs: HarmonicCoefficients) -> HarmonicCoefficients:
    """``Lambda_J f``: degree ``n`` is multiplied by ``phi(n / 2^J)^2``."""
    if f_coeffs.d != d:
        raise ValueError("dimension mismatch")
    n = np.arange(f_coeffs.max_degree + 1, dtype=float)
    return f_coeffs.scale_degrees(w.phi(n / 2.0**J) ** 2)
