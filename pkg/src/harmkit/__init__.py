"""Numerical harmonic analysis: series, Fourier analysis on T^n and R,
measures, almost periodic means and metric regularization."""
from ._kernels import BACKEND
from .errors import HarmkitError

__version__ = "0.1.0"

__all__ = ["BACKEND", "HarmkitError", "__version__"]
