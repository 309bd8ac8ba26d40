"""Polynomial curvelet Parseval frames on the sphere ``S^{d-1}``, ``d >= 3``."""

__version__ = "0.1.0"

from .curvelets import CurveletSpectrum, build_spectrum, eval_curvelet, eval_rotated
from .frames import FrameGrid, ResourceError, analyze, build_frame_grid, project_Lambda, synthesize
from .harmonics import HarmonicCoefficients, addition_kernel, eval_Y
from .quadrature import QuadratureRule, integrate, product_rule
from .specfun import HarmonicIndex, harmonic_dim, index_set
from .windows import WindowPair, make_window

__all__ = [
    "__version__",
    "CurveletSpectrum",
    "build_spectrum",
    "eval_curvelet",
    "eval_rotated",
    "FrameGrid",
    "ResourceError",
    "analyze",
    "build_frame_grid",
    "project_Lambda",
    "synthesize",
    "HarmonicCoefficients",
    "addition_kernel",
    "eval_Y",
    "QuadratureRule",
    "integrate",
    "product_rule",
    "HarmonicIndex",
    "harmonic_dim",
    "index_set",
    "WindowPair",
    "make_window",
]
