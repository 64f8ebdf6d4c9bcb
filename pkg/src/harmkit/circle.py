"""Fourier analysis on the circle ``T`` and the torus ``T^n``.

Functions are stored as samples on the uniform grid
``{exp(2 pi i k / m)}^n`` (row-major, axis order 1..n).  Coefficients use the
trapezoid rule, computed with an FFT; they are exact for trigonometric
polynomials whose degree per axis is below ``m/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np
from scipy import optimize

from .errors import AliasError, DimensionError, DomainError, GridMismatchError

__all__ = [
    "CircleGrid",
    "TrigPoly",
    "DiskPoint",
    "fourier_coefficient",
    "coefficient_array",
    "partial_sum",
    "poisson_kernel_disk",
    "poisson_kernel_polydisk",
    "abel_extend",
    "parseval_defect",
    "convolve_circle",
    "max_principle_check",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class CircleGrid:
    """Samples of a function on ``T^n`` at ``m`` equispaced points per axis."""

    n: int
    m: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("dimension must be >= 1")
        if self.m < 16 or self.m & (self.m - 1):
            raise ValueError(f"samples per axis must be a power of two >= 16, got {self.m}")
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.size != self.m**self.n:
            raise ValueError(f"expected {self.m ** self.n} samples, got {vals.size}")
        vals = vals.reshape((self.m,) * self.n).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn: Callable, n: int = 1, m: int = 64) -> "CircleGrid":
        """Sample ``fn(w_1, ..., w_n)`` with each ``w_j`` a unit complex array."""
        return cls(n, m, fn(*cls.nodes(n, m)))

    @staticmethod
    def nodes(n: int, m: int) -> list[np.ndarray]:
        w = np.exp(2j * np.pi * np.arange(m) / m)
        return list(np.meshgrid(*([w] * n), indexing="ij"))

    @cached_property
    def spectrum(self) -> np.ndarray:
        """All grid coefficients in FFT index order."""
        out = np.fft.fftn(self.values) / self.m**self.n
        out.setflags(write=False)
        return out

    def same_grid(self, other: "CircleGrid") -> bool:
        return self.n == other.n and self.m == other.m

    def to_json(self) -> dict:
        flat = self.values.ravel()
        return {"dim": self.n, "m": self.m, "samples": [[v.real, v.imag] for v in flat]}

    @classmethod
    def from_json(cls, doc: dict) -> "CircleGrid":
        vals = np.array([complex(re, im) for re, im in doc["samples"]])
        return cls(int(doc["dim"]), int(doc["m"]), vals)


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """``sum a_alpha w^alpha`` over a finite set of ``alpha in Z^n``."""

    n: int
    coeffs: Mapping[tuple, complex]

    def __post_init__(self):
        clean = {}
        for k, v in self.coeffs.items():
            k = (int(k),) if np.ndim(k) == 0 else tuple(int(i) for i in k)
            if len(k) != self.n:
                raise DimensionError(f"index {k} has dimension {len(k)}, expected {self.n}")
            if v != 0:
                clean[k] = complex(v)
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @property
    def degree(self) -> int:
        """Largest ``|alpha_j|`` over the support (0 for the zero polynomial)."""
        return max((max(abs(i) for i in k) for k in self.coeffs), default=0)

    def __getitem__(self, alpha) -> complex:
        alpha = (alpha,) if np.ndim(alpha) == 0 else tuple(alpha)
        return self.coeffs.get(alpha, 0j)

    def __call__(self, *w):
        """Evaluate at boundary points; for interior points use :func:`abel_extend`."""
        if len(w) != self.n:
            raise DimensionError(f"need {self.n} coordinates")
        w = [np.asarray(x, dtype=np.complex128) for x in w]
        out = np.zeros(np.broadcast(*w).shape, dtype=np.complex128)
        for alpha, a in self.coeffs.items():
            term = a
            for wj, k in zip(w, alpha):
                term = term * wj**k
            out = out + term
        return out

    def sample(self, m: int) -> CircleGrid:
        if self.degree >= m // 2:
            raise AliasError(f"degree {self.degree} needs more than {m} samples per axis")
        return CircleGrid.from_function(self, self.n, m)

    def l2_squared(self) -> float:
        return math.fsum(abs(v) ** 2 for v in self.coeffs.values())

    def to_json(self) -> dict:
        return {
            "dim": self.n,
            "entries": [[list(k), v.real, v.imag] for k, v in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TrigPoly":
        n = int(doc["dim"])
        return cls(n, {tuple(idx): complex(re, im) for idx, re, im in doc["entries"]})

    @classmethod
    def random(cls, rng: np.random.Generator, n: int = 1, degree: int = 10) -> "TrigPoly":
        shape = (2 * degree + 1,) * n
        c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return cls(n, {tuple(int(i) - degree for i in idx): c[idx] for idx in np.ndindex(*shape)})


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit polydisk."""

    z: tuple

    def __post_init__(self):
        z = tuple(complex(v) for v in np.atleast_1d(self.z))
        if not z:
            raise DimensionError("empty point")
        if any(abs(v) >= 1.0 for v in z):
            raise DomainError(f"{z} is not in the open unit polydisk")
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return len(self.z)


def _as_point(z) -> DiskPoint:
    return z if isinstance(z, DiskPoint) else DiskPoint(z)


def _check_alias(f: CircleGrid, alpha) -> tuple:
    alpha = (int(alpha),) if np.ndim(alpha) == 0 else tuple(int(a) for a in alpha)
    if len(alpha) != f.n:
        raise DimensionError(f"index {alpha} has dimension {len(alpha)}, grid has {f.n}")
    if any(abs(a) >= f.m // 2 for a in alpha):
        raise AliasError(f"index {alpha} aliases on a grid with m = {f.m}; need |alpha_j| < {f.m // 2}")
    return alpha


def fourier_coefficient(f: CircleGrid, alpha) -> complex:
    """``a_alpha = (2 pi)^-n int f(w) conj(w)^alpha |dw|`` by the trapezoid rule."""
    alpha = _check_alias(f, alpha)
    return complex(f.spectrum[tuple(a % f.m for a in alpha)])


def coefficient_array(f: CircleGrid, N: int) -> np.ndarray:
    """Coefficients for the box ``|alpha_j| <= N``, centered (index ``N`` is zero)."""
    if N >= f.m // 2:
        raise AliasError(f"degree {N} aliases on a grid with m = {f.m}")
    idx = np.arange(-N, N + 1) % f.m
    return f.spectrum[np.ix_(*([idx] * f.n))]


def partial_sum(f: CircleGrid, N: int) -> TrigPoly:
    """``f_N = sum_{|alpha_j| <= N} a_alpha w^alpha``."""
    c = coefficient_array(f, N)
    return TrigPoly(f.n, {tuple(int(i) - N for i in k): c[k] for k in np.ndindex(*c.shape)})


def poisson_kernel_disk(z, w, form: str = "closed", terms: int | None = None):
    """``P(z, w) = (1 - |z|^2) / (2 pi |z - w|^2)`` for ``|z| < 1 = |w|``.

    ``form="series"`` sums ``(1/2pi) sum_l r^|l| ...`` directly: the
    nonnegative powers ``(z conj w)^l`` and their conjugates.
    """
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("z must lie in the open unit disk")
    if form == "closed":
        return (1.0 - np.abs(z) ** 2) / (_TWO_PI * np.abs(z - w) ** 2)
    if form != "series":
        raise ValueError(f"unknown form {form!r}")
    q = z * np.conj(w)
    rmax = float(np.max(np.abs(q))) if q.size else 0.0
    if terms is None:
        terms = 1 if rmax == 0 else int(math.ceil(math.log(1e-17) / math.log(rmax))) + 1
    total = np.ones(q.shape)
    p = np.ones(q.shape, dtype=np.complex128)
    for _ in range(terms):
        p = p * q
        total = total + 2.0 * p.real
    return total / _TWO_PI


def poisson_kernel_polydisk(z, w):
    """Product ``prod_j P(z_j, w_j)`` of one-dimensional disk kernels."""
    z = _as_point(z).z
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    if w.shape[0] != len(z):
        raise DimensionError("z and w dimensions differ")
    out = 1.0
    for zj, wj in zip(z, w):
        out = out * poisson_kernel_disk(zj, wj)
    return out


def _axis_weights(zj: complex, m: int) -> np.ndarray:
    """Per-axis factors ``z^l`` (``l >= 0``) and ``conj(z)^|l|`` (``l < 0``) in FFT order.

    The Nyquist index ``m/2`` is split evenly between ``+m/2`` and ``-m/2``,
    so the extension of real samples is real and matches them on ``T``.
    """
    k = np.fft.fftfreq(m, 1.0 / m).astype(int)
    out = np.where(k >= 0, zj ** np.abs(k), np.conj(zj) ** np.abs(k))
    nyq = m // 2
    out[nyq] = 0.5 * (zj**nyq + np.conj(zj) ** nyq)
    return out


def abel_extend(f: CircleGrid, z, route: str = "series") -> complex:
    """Harmonic (polyharmonic on ``T^n``) extension of ``f`` at an interior point.

    ``route="series"`` sums ``sum_alpha a_alpha z~^alpha`` with ``z~^alpha``
    using ``z_j`` for ``alpha_j >= 0`` and ``conj(z_j)`` otherwise; it is
    accurate up to the boundary.  ``route="kernel"`` applies the trapezoid
    rule to ``int f(w) P_n(z, w) |dw|`` and is only trustworthy while the
    kernel is resolved, roughly ``(1 - |z|) m >> 1``.
    """
    p = _as_point(z)
    if p.n != f.n:
        raise DimensionError(f"point has dimension {p.n}, grid has {f.n}")
    if route == "series":
        acc = f.spectrum
        for zj in reversed(p.z):
            acc = acc @ _axis_weights(zj, f.m)
        return complex(acc)
    if route != "kernel":
        raise ValueError(f"unknown route {route!r}")
    nodes = CircleGrid.nodes(f.n, f.m)
    kern = np.ones(f.values.shape)
    for zj, wj in zip(p.z, nodes):
        kern = kern * poisson_kernel_disk(zj, wj) * _TWO_PI
    return complex(np.mean(f.values * kern))


def _extend_many(f: CircleGrid, zs: np.ndarray) -> np.ndarray:
    """Series extension at many points of the unit disk (``n = 1``)."""
    zs = np.asarray(zs, dtype=np.complex128)
    k = np.fft.fftfreq(f.m, 1.0 / f.m).astype(int)
    ak = np.abs(k)
    Z = np.where(k >= 0, zs[:, None] ** ak, np.conj(zs)[:, None] ** ak)
    nyq = f.m // 2
    Z[:, nyq] = 0.5 * (zs**nyq + np.conj(zs) ** nyq)
    return Z @ f.spectrum


def parseval_defect(f: CircleGrid, N: int) -> float:
    """``(2 pi)^-n int |f|^2 - sum_{|alpha_j| <= N} |a_alpha|^2`` (Bessel: ``>= 0``)."""
    mean_sq = float(np.mean(np.abs(f.values) ** 2))
    box = coefficient_array(f, N)
    return mean_sq - float(np.sum(np.abs(box) ** 2))


def convolve_circle(f: CircleGrid, g: CircleGrid) -> CircleGrid:
    """``(f * g)(z) = (2 pi)^-n int f(w) g(z conj w) |dw|``, so ``c_alpha = a_alpha b_alpha``."""
    if not f.same_grid(g):
        raise GridMismatchError(f"grids differ: (n={f.n}, m={f.m}) vs (n={g.n}, m={g.m})")
    vals = np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(g.values)) / f.m**f.n
    return CircleGrid(f.n, f.m, vals)


def _boundary_max(f: CircleGrid, refine: int = 16) -> tuple[float, float]:
    """Maximum of the real trigonometric interpolant on ``T`` and its angle."""
    M = f.m * refine
    theta = np.arange(M) * (_TWO_PI / M)
    vals = _extend_many(f, np.exp(1j * theta)).real
    k = int(np.argmax(vals))

    def neg(t):
        return -float(_extend_many(f, np.array([np.exp(1j * t)])).real[0])

    step = _TWO_PI / M
    res = optimize.minimize_scalar(neg, bounds=(theta[k] - step, theta[k] + step), method="bounded",
                                   options={"xatol": 1e-13})
    best, arg = (float(-res.fun), float(res.x)) if -res.fun > vals[k] else (float(vals[k]), float(theta[k]))
    return best, arg


def max_principle_check(f: CircleGrid, r: float = 0.95, grid: tuple[int, int] = (64, 256)) -> dict:
    """Compare the interior maximum of the harmonic extension with the boundary maximum.

    The extension is evaluated on a polar grid of ``grid[0]`` radii in
    ``[0, r]`` times ``grid[1]`` angles; the boundary maximum is that of the
    trigonometric interpolant, refined by zero padding and polished locally.
    """
    if f.n != 1:
        raise DimensionError("max_principle_check is one-dimensional")
    if np.max(np.abs(f.values.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(f.values)))):
        raise DomainError("boundary data must be real")
    if not 0 <= r < 1:
        raise DomainError("r must lie in [0, 1)")
    nr, nt = grid
    radii = np.linspace(0.0, r, nr)
    theta = np.arange(nt) * (_TWO_PI / nt)
    zs = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    interior = _extend_many(f, zs).real
    k = int(np.argmax(interior))
    bmax, barg = _boundary_max(f)
    imax = float(interior[k])
    return {
        "interior_max": imax,
        "interior_argmax": [float(zs[k].real), float(zs[k].imag)],
        "boundary_max": bmax,
        "boundary_argmax": barg,
        "ok": imax <= bmax + 1e-9,
    }
