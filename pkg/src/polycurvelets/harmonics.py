"""Orthonormal spherical harmonics ``Y_k^{d,n}`` and harmonic coefficient tables."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import cart_to_sph
from .specfun import (
    HarmonicIndex,
    gegenbauer,
    gegenbauer_all,
    index_set,
    ln_gamma,
    log_normalization_A,
)

__all__ = [
    "eval_Y",
    "pole_value",
    "addition_kernel",
    "fourier_coefficient",
    "HarmonicCoefficients",
    "zonal_coefficients",
]


def eval_Y(idx: HarmonicIndex, x) -> np.ndarray:
    """Evaluate ``Y_k^{d,n}`` at points ``x`` (last axis of length ``d``)."""
    x = np.asarray(x, dtype=float)
    d = idx.d
    if x.shape[-1] != d:
        raise ValueError(f"points must have {d} coordinates")
    theta = cart_to_sph(x)
    kc = idx.chain
    val = np.full(x.shape[:-1], math.exp(log_normalization_A(idx)), dtype=complex)
    for j in range(d - 2):
        kn = abs(kc[j + 1])
        ang = theta[..., d - j - 2]
        lam = (d - j - 2) / 2 + kn
        val = val * gegenbauer(kc[j] - kn, lam, np.cos(ang))
        if kn:
            val = val * np.sin(ang) ** kn
    if kc[-1]:
        val = val * np.exp(1j * kc[-1] * theta[..., 0])
    return val


def pole_value(d: int, n: int) -> float:
    """``Y_0^{d,n}(e^d) = sqrt(Gamma(n+d-2)(2n+d-2) / (n! Gamma(d-1)))``."""
    return math.exp(
        0.5 * (ln_gamma(n + d - 2) + math.log(2 * n + d - 2) - ln_gamma(n + 1) - ln_gamma(d - 1))
    )


def addition_kernel(d: int, n: int, t):
    """``(2n + d - 2)/(d - 2) * C_n^{(d-2)/2}(t)``, the reproducing kernel of degree ``n``."""
    return (2 * n + d - 2) / (d - 2) * gegenbauer(n, (d - 2) / 2, t)


def fourier_coefficient(f, idx: HarmonicIndex, rule) -> complex:
    """``<f, Y_k^{d,n}>`` by quadrature; ``f`` is a vectorized callable."""
    vals = f(rule.points) if callable(f) else np.asarray(f)
    return complex(np.sum(rule.weights * vals * np.conj(eval_Y(idx, rule.points))))


@dataclass
class HarmonicCoefficients:
    """Sparse table ``HarmonicIndex -> complex`` of degree at most ``max_degree``."""

    d: int
    max_degree: int
    table: dict[HarmonicIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.table:
            self._check(idx)

    def _check(self, idx: HarmonicIndex):
        if idx.d != self.d or idx.n > self.max_degree:
            raise ValueError(f"index {idx} not admissible for d={self.d}, N={self.max_degree}")

    def __setitem__(self, idx: HarmonicIndex, value):
        self._check(idx)
        self.table[idx] = complex(value)

    def __getitem__(self, idx: HarmonicIndex) -> complex:
        return self.table.get(idx, 0j)

    def items(self):
        return sorted(self.table.items())

    def degree_energy(self) -> np.ndarray:
        """``sum_k |f(n, k)|^2`` for ``n = 0..max_degree``."""
        out = np.zeros(self.max_degree + 1)
        for idx, c in self.table.items():
            out[idx.n] += abs(c) ** 2
        return out

    def norm_sq(self) -> float:
        return float(self.degree_energy().sum())

    def scale_degrees(self, multiplier) -> "HarmonicCoefficients":
        """New table with degree ``n`` scaled by ``multiplier[n]``."""
        mult = np.asarray(multiplier)
        return HarmonicCoefficients(
            self.d,
            self.max_degree,
            {idx: c * mult[idx.n] for idx, c in self.table.items() if mult[idx.n] != 0},
        )

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], dtype=complex)
        for idx, c in self.table.items():
            if c != 0:
                out += c * eval_Y(idx, x)
        return out

    __call__ = evaluate

    @classmethod
    def random(cls, rng: np.random.Generator, d: int, degree: int) -> "HarmonicCoefficients":
        """Complex Gaussian coefficients on every index of degree ``<= degree``."""
        table = {}
        for n in range(degree + 1):
            for idx in index_set(d, n):
                table[idx] = complex(rng.standard_normal(), rng.standard_normal())
        return cls(d, degree, table)

    @classmethod
    def from_function(cls, f, d: int, degree: int, rule) -> "HarmonicCoefficients":
        """Project ``f`` onto all harmonics of degree ``<= degree`` by quadrature."""
        vals = f(rule.points) if callable(f) else np.asarray(f)
        wv = rule.weights * vals
        table = {}
        for n in range(degree + 1):
            for idx in index_set(d, n):
                table[idx] = complex(np.sum(wv * np.conj(eval_Y(idx, rule.points))))
        return cls(d, degree, table)

    def write_csv(self, path) -> None:
        """CSV with columns ``n, k1..k_{d-2}, re, im``."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n"] + [f"k{i + 1}" for i in range(self.d - 2)] + ["re", "im"])
            for idx, c in self.items():
                writer.writerow([idx.n, *idx.k, repr(c.real), repr(c.imag)])


def zonal_coefficients(F, d: int, degree: int, nodes: int | None = None) -> HarmonicCoefficients:
    """Coefficients of the zonal function ``x -> F(x_d)`` (``F`` smooth on [-1, 1]).

    Only ``k = 0`` survives; ``<f, Y_0^{d,n}> = c_d int F(t) Y_0^{d,n}(t) (1-t^2)^{(d-3)/2} dt``
    evaluated with Gauss-Gegenbauer nodes.
    """
    from .quadrature import _gauss_gegenbauer

    lam = (d - 2) / 2
    npts = nodes or degree + 64
    t, w = _gauss_gegenbauer(npts, lam)
    vals = F(t) * w
    C = gegenbauer_all(degree, lam, t)
    table = {}
    for n in range(degree + 1):
        # Y_0^{d,n}(x) = C_n^lam(x_d) * Y_0(e^d) / C_n^lam(1)
        c1 = math.exp(ln_gamma(n + 2 * lam) - ln_gamma(n + 1) - ln_gamma(2 * lam))
        table[HarmonicIndex.zonal(d, n)] = complex(np.sum(vals * C[n]) * pole_value(d, n) / c1)
    return HarmonicCoefficients(d, degree, table)
