"""Finite trigonometric sums ``sum a_j exp(i xi_j x)`` as almost periodic functions.

The mean, inner product and Bohr coefficients are computed exactly from the
amplitudes.  The averaged mode integrates each term in closed form, so its
deviation from the exact mean obeys a bound that is itself exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circle import TrigPoly

__all__ = [
    "FREQ_TOL",
    "TrigSum",
    "evaluate",
    "invariant_mean",
    "mean_error_bound",
    "ap_inner_product",
    "bohr_coefficient",
    "spectrum",
    "torus_trajectory",
]

# frequencies are identified only when equal: any tolerance would give
# mu(e_xi) != 0 for some xi != 0
FREQ_TOL = 0.0


def _merge(terms: Iterable[tuple[float, complex]]) -> tuple:
    ordered = sorted(((float(xi), complex(a)) for xi, a in terms), key=lambda t: t[0])
    out: list[list] = []
    for xi, a in ordered:
        if out and abs(xi - out[-1][0]) <= FREQ_TOL:
            out[-1][1] += a
        else:
            out.append([xi, a])
    return tuple((xi, a) for xi, a in out if a != 0)


@dataclass(frozen=True)
class TrigSum:
    """Terms ``(xi_j, a_j)`` with distinct frequencies; equal frequencies merge."""

    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _merge(self.terms))

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([xi for xi, _ in self.terms])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.terms], dtype=np.complex128)

    def __call__(self, x):
        return evaluate(self, x)

    def __mul__(self, other: "TrigSum") -> "TrigSum":
        return TrigSum(tuple((x + y, a * b) for x, a in self.terms for y, b in other.terms))

    def conj(self) -> "TrigSum":
        return TrigSum(tuple((-x, a.conjugate()) for x, a in self.terms))

    def translate(self, y: float) -> "TrigSum":
        """``x -> f(x - y)``."""
        return TrigSum(tuple((x, a * complex(math.cos(x * y), -math.sin(x * y))) for x, a in self.terms))

    def l1(self) -> float:
        return math.fsum(abs(a) for _, a in self.terms)

    def to_json(self) -> list:
        return [[xi, a.real, a.imag] for xi, a in self.terms]

    @classmethod
    def from_json(cls, doc: Sequence) -> "TrigSum":
        if isinstance(doc, dict) or any(not isinstance(t, (list, tuple)) or len(t) != 3 for t in doc):
            raise ValueError("a TrigSum is a list of [xi, re, im] triples")
        return cls(tuple((float(xi), complex(re, im)) for xi, re, im in doc))

    @classmethod
    def exponential(cls, xi: float, a: complex = 1.0) -> "TrigSum":
        return cls(((xi, a),))


def evaluate(f: TrigSum, x):
    """``sum a_j exp(i xi_j x)``; scalar in, complex out."""
    xs = np.asarray(x, dtype=np.float64)
    if not f.terms:
        out = np.zeros(xs.shape, dtype=np.complex128)
    else:
        out = np.exp(1j * np.multiply.outer(xs, f.frequencies)) @ f.amplitudes
    return complex(out) if xs.ndim == 0 else out


def mean_error_bound(f: TrigSum, L: float) -> float:
    """``sum_{xi_j != 0} |a_j| / (|xi_j| L)``."""
    return math.fsum(abs(a) / (abs(xi) * L) for xi, a in f.terms if abs(xi) > FREQ_TOL)


def invariant_mean(f: TrigSum, mode: str = "exact", L: float | None = None) -> complex:
    """Invariant mean ``mu(f)``.

    ``mode="exact"`` returns the zero-frequency amplitude.  ``mode="averaged"``
    returns ``(1/2L) int_{-L}^{L} f``, term by term ``a_j sin(xi_j L)/(xi_j L)``.
    """
    if mode == "exact":
        return sum((a for xi, a in f.terms if abs(xi) <= FREQ_TOL), 0j)
    if mode != "averaged":
        raise ValueError(f"unknown mode {mode!r}")
    if L is None or not L > 0:
        raise ValueError("averaged mode needs L > 0")
    total = 0j
    for xi, a in f.terms:
        t = xi * L
        total += a * (1.0 if t == 0 else math.sin(t) / t)
    return total


def ap_inner_product(f: TrigSum, g: TrigSum) -> complex:
    """``<f, g> = mu(f conj g)``; sums ``a_j conj b_k`` over matched frequencies."""
    total = 0j
    gf = g.frequencies
    for xi, a in f.terms:
        if gf.size:
            k = int(np.argmin(np.abs(gf - xi)))
            if abs(gf[k] - xi) <= FREQ_TOL:
                total += a * g.terms[k][1].conjugate()
    return total


def bohr_coefficient(f: TrigSum, xi: float, mode: str = "exact", L: float | None = None) -> complex:
    """``<f, e_xi>``, the mean of ``f e_{-xi}``."""
    shifted = TrigSum(tuple((x - xi, a) for x, a in f.terms))
    return invariant_mean(shifted, mode, L)


def spectrum(f: TrigSum, eps: float) -> list[tuple[float, complex]]:
    """Terms with ``|a_j| >= eps``; there are at most ``<f, f> / eps^2`` of them."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    out = [(xi, a) for xi, a in f.terms if abs(a) >= eps]
    bound = ap_inner_product(f, f).real / eps**2
    if len(out) > bound * (1 + 1e-12):
        raise RuntimeError(f"{len(out)} terms exceed the Bessel bound {bound:g}")
    return out


def torus_trajectory(phi: TrigPoly, a: Sequence[float], z: Sequence[complex]) -> TrigSum:
    """``t -> phi(z_1 exp(i a_1 t), ..., z_n exp(i a_n t))`` as a trigonometric sum."""
    a = [float(v) for v in a]
    z = [complex(v) for v in z]
    if len(a) != phi.n or len(z) != phi.n:
        raise ValueError("a and z must have the dimension of phi")
    terms = []
    for alpha, c in phi.coeffs.items():
        amp = c
        for zj, k in zip(z, alpha):
            amp *= zj**k
        terms.append((math.fsum(k * aj for k, aj in zip(alpha, a)), amp))
    return TrigSum(tuple(terms))
