"""Finite measures on ``T^n`` and ``R`` realized as atoms plus a density.

On ``T^n`` the density is a :class:`~harmkit.circle.TrigPoly` applied with
the normalized integral ``(2 pi)^-n int f phi |dw|``; on ``R`` it is an
integrable :class:`~harmkit.line.LineFunction`.  Every measure also exposes a
discrete *rule* (points, weights): atoms verbatim, plus a quadrature of the
density.  Products of measures are tensor products of rules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import line as _line
from .circle import CircleGrid, TrigPoly, poisson_kernel_disk
from .errors import DimensionError, DomainError, QuadratureError
from .line import LineFunction
from .quadrature import DEFAULT_QUAD, QuadSpec

__all__ = [
    "MeasureT",
    "MeasureR",
    "ProductMeasure",
    "dirac_t",
    "dirac_r",
    "apply",
    "norm",
    "fourier_coefficient_measure",
    "fourier_transform_measure",
    "product_measure",
    "convolve_measures",
    "convolve_measure_function",
    "abel_recover",
]

_TWO_PI = 2.0 * math.pi


def _unit_point(p, n: int) -> tuple:
    p = tuple(complex(v) for v in np.atleast_1d(p))
    if len(p) != n:
        raise DimensionError(f"point {p} has dimension {len(p)}, expected {n}")
    if any(abs(abs(v) - 1.0) > 1e-12 for v in p):
        raise DomainError(f"{p} is not on the torus")
    return p


@dataclass(frozen=True, eq=False)
class MeasureT:
    """``sum w_k delta_{p_k} + f(w) |dw| / (2 pi)^n`` on ``T^n``."""

    n: int
    atoms: tuple = ()
    density: TrigPoly | None = None

    def __post_init__(self):
        atoms = tuple((_unit_point(p, self.n), complex(w)) for p, w in self.atoms if w != 0)
        object.__setattr__(self, "atoms", atoms)
        if self.density is not None and self.density.n != self.n:
            raise DimensionError("density dimension differs from the measure")

    def grid_size(self, m: int | None = None) -> int:
        if m is not None:
            return m
        deg = self.density.degree if self.density is not None else 0
        return max(64, 1 << int(math.ceil(math.log2(4 * deg + 4))))

    def rule(self, m: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Points ``(K, n)`` and weights: atoms, then trapezoid nodes of the density."""
        pts = [np.array(p) for p, _ in self.atoms]
        wts = [w for _, w in self.atoms]
        P = np.array(pts, dtype=np.complex128).reshape(-1, self.n)
        W = np.array(wts, dtype=np.complex128)
        if self.density is not None:
            m = self.grid_size(m)
            nodes = CircleGrid.nodes(self.n, m)
            dens = self.density(*nodes).ravel() / m**self.n
            P = np.vstack([P, np.stack([g.ravel() for g in nodes], axis=1)])
            W = np.concatenate([W, dens])
        return P, W


@dataclass(frozen=True, eq=False)
class MeasureR:
    """``sum w_k delta_{x_k} + f(x) dx`` on the line."""

    atoms: tuple = ()
    density: LineFunction | None = None

    def __post_init__(self):
        atoms = tuple((float(x), complex(w)) for x, w in self.atoms if w != 0)
        object.__setattr__(self, "atoms", atoms)
        if self.density is not None and not self.density.integrable:
            raise DomainError("density must be integrable")

    def rule(self, q: QuadSpec = DEFAULT_QUAD) -> tuple[np.ndarray, np.ndarray]:
        P = np.array([x for x, _ in self.atoms], dtype=np.float64)
        W = np.array([w for _, w in self.atoms], dtype=np.complex128)
        if self.density is not None:
            x, w, v = _line._nodes(self.density, q)
            P = np.concatenate([P, x])
            W = np.concatenate([W, w * v])
        return P, W


def dirac_t(p, weight: complex = 1.0) -> MeasureT:
    p = tuple(np.atleast_1d(p))
    return MeasureT(len(p), ((p, weight),))


def dirac_r(x: float, weight: complex = 1.0) -> MeasureR:
    return MeasureR(((x, weight),))


def _call_t(phi: Callable, P: np.ndarray):
    return np.asarray(phi(*[P[:, j] for j in range(P.shape[1])]), dtype=np.complex128) * np.ones(P.shape[0])


def apply(mu, phi, *, m: int | None = None, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """``mu(phi)`` for a continuous (on ``R``: bounded continuous) test function.

    On ``T^n`` ``phi`` takes ``n`` unit complex arrays; on ``R`` one real array.
    The density part on ``R`` is integrated against the density's envelope,
    which controls the tail because ``phi`` is bounded.
    """
    if isinstance(mu, ProductMeasure):
        return mu.apply(phi, m=m, q=q)
    if isinstance(mu, MeasureT):
        total = 0j
        for p, w in mu.atoms:
            total += w * complex(np.asarray(phi(*[np.array([v]) for v in p])).ravel()[0])
        if mu.density is not None:
            M = mu.grid_size(m)
            nodes = CircleGrid.nodes(mu.n, M)
            vals = mu.density(*nodes) * np.asarray(phi(*nodes))
            total += complex(np.mean(vals))
        return total
    if isinstance(mu, MeasureR):
        total = 0j
        for x, w in mu.atoms:
            total += w * complex(np.asarray(phi(np.array([x]))).ravel()[0])
        if mu.density is not None:
            f = mu.density
            sup = phi.envelope.C if isinstance(phi, LineFunction) else 1.0
            feats = tuple(f.features) + (tuple(phi.features) if isinstance(phi, LineFunction) else ())
            brks = tuple(f.breaks) + (tuple(phi.breaks) if isinstance(phi, LineFunction) else ())
            x, w = _line._rule(f.envelope.scaled(max(sup, 1.0)), q, f.support, feats, brks)
            fx = f(x)
            f.envelope.check(x, fx, f.name)
            total += complex(np.dot(w, fx * np.asarray(phi(x), dtype=np.complex128)))
        return total
    raise TypeError(f"not a measure: {type(mu).__name__}")


def norm(mu, *, m: int | None = None, q: QuadSpec = DEFAULT_QUAD) -> float:
    """``sum |w_k| + normalized int |density|`` (the implemented ``||mu||_*``)."""
    if isinstance(mu, ProductMeasure):
        return norm(mu.first, m=m, q=q) * norm(mu.second, m=m, q=q)
    atoms = math.fsum(abs(w) for _, w in mu.atoms)
    if mu.density is None:
        return atoms
    if isinstance(mu, MeasureT):
        M = m or (512 if mu.n == 1 else 128)
        vals = mu.density(*CircleGrid.nodes(mu.n, M))
        return atoms + float(np.mean(np.abs(vals)))
    return atoms + _line.l1_norm(mu.density, q)


def fourier_coefficient_measure(mu: MeasureT, alpha) -> complex:
    """``a_alpha = mu(w^-alpha)``; the density contributes its coefficient exactly."""
    alpha = (int(alpha),) if np.ndim(alpha) == 0 else tuple(int(a) for a in alpha)
    if len(alpha) != mu.n:
        raise DimensionError(f"index {alpha} has dimension {len(alpha)}, expected {mu.n}")
    total = 0j
    for p, w in mu.atoms:
        term = w
        for pj, k in zip(p, alpha):
            term *= pj ** (-k)
        total += term
    if mu.density is not None:
        total += mu.density[alpha]
    return total


def fourier_transform_measure(mu: MeasureR, xi, q: QuadSpec = DEFAULT_QUAD):
    """``mu^(xi) = mu(e_{-xi})`` with ``e_{-xi}(x) = exp(-i xi x)``."""
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = np.zeros(xi.shape, dtype=np.complex128)
    for x, w in mu.atoms:
        out += w * np.exp(-1j * xi * x)
    if mu.density is not None:
        out += _line.hat_values(mu.density, xi, q)
    return complex(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class ProductMeasure:
    """``mu x nu`` on the doubled domain, applied through tensor-product rules."""

    first: object
    second: object

    @property
    def kind(self) -> str:
        return "T" if isinstance(self.first, MeasureT) else "R"

    @property
    def atoms(self) -> tuple:
        out = []
        for p, a in self.first.atoms:
            for r, b in self.second.atoms:
                pt = (tuple(p) + tuple(r)) if self.kind == "T" else (p, r)
                out.append((pt, a * b))
        return tuple(out)

    @property
    def density(self):
        """Outer product of the two densities (``None`` unless both exist)."""
        f, g = self.first.density, self.second.density
        if f is None or g is None:
            return None
        if self.kind == "T":
            return TrigPoly(f.n + g.n, {a + b: u * v for a, u in f.coeffs.items() for b, v in g.coeffs.items()})
        return lambda x, y: f(x) * g(y)

    def as_measure(self) -> MeasureT:
        """The product as a ``MeasureT`` when no atom-times-density term exists."""
        mixed = (self.first.atoms and self.second.density is not None) or (
            self.first.density is not None and self.second.atoms
        )
        if self.kind != "T" or mixed:
            raise DomainError("product has a singular mixed part; use apply() on the ProductMeasure")
        return MeasureT(self.first.n + self.second.n, self.atoms, self.density)

    def apply(self, f: Callable, *, m: int | None = None, q: QuadSpec = DEFAULT_QUAD) -> complex:
        """``(mu x nu)(f)`` for ``f(z, w)`` (on ``T^n``: ``f`` takes ``2n`` coordinate arrays)."""
        if self.kind == "T":
            P1, W1 = self.first.rule(m)
            P2, W2 = self.second.rule(m)
            n1 = P1.shape[1]
            total = 0j
            for k in range(P1.shape[0]):
                coords = [np.full(P2.shape[0], P1[k, j]) for j in range(n1)] + [P2[:, j] for j in range(P2.shape[1])]
                total += W1[k] * np.dot(W2, np.asarray(f(*coords), dtype=np.complex128) * np.ones(P2.shape[0]))
            return complex(total)
        P1, W1 = self.first.rule(q)
        P2, W2 = self.second.rule(q)
        if P1.size * P2.size > 4e7:
            raise QuadratureError("tensor rule too large; loosen tau")
        vals = np.asarray(f(P1[:, None], P2[None, :]), dtype=np.complex128)
        return complex(W1 @ vals @ W2)


def product_measure(mu, nu) -> ProductMeasure:
    if type(mu) is not type(nu):
        raise DomainError("product of measures on different kinds of domain")
    return ProductMeasure(mu, nu)


def _translate_trig(f: TrigPoly, p: tuple) -> TrigPoly:
    """Coefficients of ``z -> f(z o conj p)``: ``b_alpha p^-alpha``."""
    out = {}
    for alpha, v in f.coeffs.items():
        c = v
        for pj, k in zip(p, alpha):
            c *= pj ** (-k)
        out[alpha] = c
    return TrigPoly(f.n, out)


def _add_trig(parts: Sequence[TrigPoly], n: int) -> TrigPoly | None:
    if not parts:
        return None
    acc: dict = {}
    for t in parts:
        for k, v in t.coeffs.items():
            acc[k] = acc.get(k, 0j) + v
    return TrigPoly(n, acc)


def convolve_measures(mu, nu, q: QuadSpec = DEFAULT_QUAD):
    """``mu * nu``: the product measure pushed forward by the group operation.

    On ``T^n`` this stays atoms plus a trigonometric density (``c_alpha =
    a_alpha b_alpha``).  On ``R`` atom-density terms become translated
    densities and density-density terms a quadrature-evaluated convolution.
    """
    if type(mu) is not type(nu):
        raise DomainError("convolution of measures on different kinds of domain")
    if isinstance(mu, MeasureT):
        if mu.n != nu.n:
            raise DimensionError("measures live on tori of different dimension")
        atoms = [
            (tuple(a * b for a, b in zip(p, r)), u * v) for p, u in mu.atoms for r, v in nu.atoms
        ]
        parts = []
        for p, u in mu.atoms:
            if nu.density is not None:
                parts.append(_scale_trig(_translate_trig(nu.density, p), u))
        for r, v in nu.atoms:
            if mu.density is not None:
                parts.append(_scale_trig(_translate_trig(mu.density, r), v))
        if mu.density is not None and nu.density is not None:
            f, g = mu.density, nu.density
            parts.append(TrigPoly(mu.n, {k: f[k] * g[k] for k in set(f.coeffs) & set(g.coeffs)}))
        return MeasureT(mu.n, tuple(atoms), _add_trig(parts, mu.n))
    atoms = [(x + y, u * v) for x, u in mu.atoms for y, v in nu.atoms]
    fs = []
    for x, u in mu.atoms:
        if nu.density is not None:
            fs.append(nu.density.translate(x).scaled(u))
    for y, v in nu.atoms:
        if mu.density is not None:
            fs.append(mu.density.translate(y).scaled(v))
    if mu.density is not None and nu.density is not None:
        fs.append(_line.convolution_function(mu.density, nu.density, q))
    merged: dict = {}
    for x, w in atoms:
        merged[x] = merged.get(x, 0j) + w
    return MeasureR(tuple(merged.items()), _line.sum_functions(fs) if fs else None)


def _scale_trig(f: TrigPoly, c: complex) -> TrigPoly:
    return TrigPoly(f.n, {k: c * v for k, v in f.coeffs.items()})


def convolve_measure_function(mu, h: Callable, *, m: int | None = None, q: QuadSpec = DEFAULT_QUAD) -> Callable:
    """``mu * h``: on ``T^n`` ``z -> mu(w -> h(z o conj w))``; on ``R`` ``x -> mu(u -> h(x - u))``."""
    if isinstance(mu, MeasureT):
        P, W = mu.rule(m)

        def on_torus(*z):
            z = [np.asarray(c, dtype=np.complex128) for c in z]
            shape = np.broadcast(*z).shape
            flat = [np.broadcast_to(c, shape).ravel() for c in z]
            vals = np.asarray(h(*[flat[j][:, None] * np.conj(P[None, :, j]) for j in range(mu.n)]))
            return (vals @ W).reshape(shape)

        return on_torus
    if isinstance(mu, MeasureR):
        P, W = mu.rule(q)

        def on_line(x):
            x = np.asarray(x, dtype=np.float64)
            vals = np.asarray(h(x.ravel()[:, None] - P[None, :]), dtype=np.complex128)
            return (vals @ W).reshape(x.shape)

        return on_line
    raise TypeError(f"not a measure: {type(mu).__name__}")


def abel_recover(mu, phi, *, r=None, eta: float | None = None, m: int | None = None,
                 q: QuadSpec = DEFAULT_QUAD) -> complex:
    """Smoothed pairing that tends to ``mu(phi)``.

    On ``T^n``: ``int mu(P_n(r o zeta, .)) phi(zeta) |dzeta|``, with the
    atoms through the closed-form kernel and the density through its
    harmonic extension, integrated over ``zeta`` by the trapezoid rule on a
    grid fine enough to resolve the kernel width ``1 - r``.
    On ``R``: ``int mu(p_{eta, x}) phi(x) dx`` with ``p_{eta, x}(y) = P_eta(x - y)``.
    """
    if isinstance(mu, MeasureT):
        if r is None:
            raise ValueError("give r in (0, 1)^n")
        rs = np.broadcast_to(np.asarray(r, dtype=np.float64), (mu.n,))
        if np.any(rs <= 0) or np.any(rs >= 1):
            raise DomainError("r must lie in (0, 1)^n")
        if m is None:
            need = 32.0 / (1.0 - float(rs.max()))
            m = max(64, 1 << int(math.ceil(math.log2(need))))
        if m**mu.n > 1 << 22:
            raise QuadratureError(f"m = {m} per axis is too fine for dimension {mu.n}")
        nodes = CircleGrid.nodes(mu.n, m)
        smooth = np.zeros(nodes[0].shape, dtype=np.complex128)
        for p, w in mu.atoms:
            k = np.ones(nodes[0].shape)
            for j in range(mu.n):
                k = k * poisson_kernel_disk(rs[j] * nodes[j], p[j])
            smooth += w * k
        if mu.density is not None:
            ext = {}
            for alpha, v in mu.density.coeffs.items():
                ext[alpha] = v * float(np.prod([rs[j] ** abs(a) for j, a in enumerate(alpha)]))
            smooth += TrigPoly(mu.n, ext)(*nodes) / _TWO_PI**mu.n
        vals = smooth * np.asarray(phi(*nodes))
        return complex(np.mean(vals) * _TWO_PI**mu.n)
    if isinstance(mu, MeasureR):
        if eta is None or eta <= 0:
            raise ValueError("give eta > 0")
        if not isinstance(phi, LineFunction):
            raise TypeError("on the line phi must be a LineFunction (its envelope bounds the tail)")
        pk = _line.poisson(eta)
        total = 0j
        for x, w in mu.atoms:
            total += w * _line.convolve_line(phi, pk, x, q)
        if mu.density is not None:
            f = mu.density
            y, wy = _line._rule(f.envelope.scaled(phi.envelope.C), q, f.support, f.features, f.breaks)
            smoothed = np.array([_line.convolve_line(phi, pk, float(v), q) for v in y])
            total += complex(np.dot(wy, f(y) * smoothed))
        return total
    raise TypeError(f"not a measure: {type(mu).__name__}")
