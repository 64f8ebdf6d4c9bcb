"""Fourier analysis on the real line.

Conventions: the forward transform is ``f^(xi) = int f(x) exp(-i xi x) dx`` and
the inverse carries ``1/(2 pi) exp(+i xi x)``.

A :class:`LineFunction` couples a vectorized evaluation handle with a decay
:class:`~harmkit.quadrature.Envelope`, so every integral here is
``Simpson on [-R, R] + certified tail``.  Functions from the built-in catalog
(:func:`gaussian`, :func:`abel`, :func:`poisson`, :func:`indicator`,
:func:`sign`, ...) also carry closed-form transforms, which independent
numerical routes are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from .errors import DomainError, KernelNormalizationError, QuadratureError
from .quadrature import DEFAULT_QUAD, Envelope, QuadSpec, simpson_rule

__all__ = [
    "LineFunction",
    "StepFunction",
    "integrate",
    "fourier_transform",
    "hat_values",
    "abel_kernel",
    "abel_kernel_hat",
    "poisson_kernel_line",
    "poisson_sup_outside",
    "gaussian_hat",
    "indicator_hat",
    "gaussian",
    "abel",
    "abel_hat_function",
    "poisson",
    "indicator",
    "sign",
    "bump",
    "mollified_abel",
    "exponential",
    "abel_invert",
    "step_approximate",
    "plancherel_defect",
    "plancherel_polarized_defect",
    "schwartz_relation_defect",
    "summability_invert",
    "generalized_transform",
    "sign_pv_transform",
    "sign_pv_regularized",
    "convolve_line",
    "convolution_function",
    "sum_functions",
    "l1_norm",
    "first_moment",
]

_INF = math.inf
_TWO_PI = 2.0 * math.pi


def _shift_envelope(env: Envelope, p: float) -> Envelope:
    """Envelope of ``f(x - p)`` given the envelope of ``f``."""
    p = abs(p)
    factor = math.exp(env.decay * p)
    if env.l > 0:
        factor *= max(1.0, 2.0 ** (env.l - 1.0)) * (1.0 + p**env.l)
    return env.scaled(factor)


def _moment_envelope(env: Envelope, k: int) -> Envelope:
    """Envelope of ``x**k f(x)``."""
    if k == 0:
        return env
    if env.l > k:
        return Envelope(2.0 * env.C, env.l - k, env.decay)
    if env.decay > 0:
        b = env.decay / 2.0
        return Envelope(env.C * (k / (math.e * b)) ** k, 0.0, b)
    raise QuadratureError(f"x^{k} f(x) is not integrable under envelope {env}")


@dataclass(frozen=True, eq=False)
class LineFunction:
    """A complex function on the line with a decay envelope.

    Parameters
    ----------
    func : callable
        Vectorized evaluation ``ndarray -> ndarray``.
    envelope : Envelope
        Declared bound on ``|func|``; checked at every quadrature node.
    smoothness : {"continuous", "piecewise", "schwartz"}
    breaks : tuple of float
        Points where the function or a derivative jumps; always panel edges.
    features : tuple of (center, scale)
        Where the function varies; ``scale=None`` means unit scale.
    support : (lo, hi)
        The function vanishes outside this interval.
    hat, hat_envelope, hat_features, hat_breaks
        Optional closed-form transform with its own decay data.
    derivative : callable, optional
        ``derivative(x, order)`` in closed form.
    """

    func: Callable[[np.ndarray], np.ndarray]
    envelope: Envelope
    smoothness: str = "continuous"
    breaks: tuple = ()
    features: tuple = ((0.0, None),)
    support: tuple = (-_INF, _INF)
    hat: Callable[[np.ndarray], np.ndarray] | None = None
    hat_envelope: Envelope | None = None
    hat_features: tuple = ((0.0, None),)
    hat_breaks: tuple = ()
    derivative: Callable | None = None
    name: str = "f"
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        lo, hi = self.support
        if not lo < hi:
            raise ValueError("empty support")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.asarray(self.func(x), dtype=np.complex128) * np.ones_like(x)

    @property
    def bounded_support(self) -> bool:
        return math.isfinite(self.support[0]) and math.isfinite(self.support[1])

    @property
    def integrable(self) -> bool:
        return self.bounded_support or self.envelope.integrable

    def spot_check(self, R: float = 1e3, n: int = 256) -> None:
        """Sample on a logarithmic grid of ``|x|`` up to ``R``; raise on violation."""
        r = np.logspace(-3, math.log10(max(R, 1e-2)), n)
        x = np.concatenate([-r[::-1], [0.0], r])
        self.envelope.check(x, self(x), self.name)

    def translate(self, y: float) -> "LineFunction":
        """``x -> f(x - y)``."""
        f, hat = self.func, self.hat
        d = self.derivative
        return replace(
            self,
            func=lambda x: f(x - y),
            envelope=_shift_envelope(self.envelope, y),
            breaks=tuple(b + y for b in self.breaks),
            features=tuple((c + y, s) for c, s in self.features),
            support=(self.support[0] + y, self.support[1] + y),
            hat=None if hat is None else (lambda xi: hat(xi) * np.exp(-1j * xi * y)),
            derivative=None if d is None else (lambda x, k: d(x - y, k)),
            name=f"{self.name}(x-{y:g})",
            _memo={},
        )

    def reflect(self) -> "LineFunction":
        """``x -> f(-x)``."""
        f, hat = self.func, self.hat
        d = self.derivative
        return replace(
            self,
            func=lambda x: f(-x),
            breaks=tuple(-b for b in self.breaks),
            features=tuple((-c, s) for c, s in self.features),
            support=(-self.support[1], -self.support[0]),
            hat=None if hat is None else (lambda xi: hat(-xi)),
            hat_features=tuple((-c, s) for c, s in self.hat_features),
            hat_breaks=tuple(-b for b in self.hat_breaks),
            derivative=None if d is None else (lambda x, k: (-1) ** k * d(-x, k)),
            name=f"{self.name}(-x)",
            _memo={},
        )

    def scaled(self, c: complex) -> "LineFunction":
        """``x -> c f(x)``."""
        f, hat = self.func, self.hat
        d = self.derivative
        return replace(
            self,
            func=lambda x: c * f(x),
            envelope=self.envelope.scaled(abs(c)),
            hat=None if hat is None else (lambda xi: c * hat(xi)),
            hat_envelope=None if self.hat_envelope is None else self.hat_envelope.scaled(abs(c)),
            derivative=None if d is None else (lambda x, k: c * d(x, k)),
            _memo={},
        )


# --------------------------------------------------------------------------
# quadrature plumbing


def _rule(envelope: Envelope, q: QuadSpec, support, features, breaks, omega=0.0):
    lo, hi = support
    if not (math.isfinite(lo) and math.isfinite(hi)):
        R = q.cutoff(envelope)
        lo, hi = max(-R, lo), min(R, hi)
    if not hi > lo:
        return np.zeros(0), np.zeros(0)
    mass = envelope.l1_bound() if envelope.integrable else envelope.C * (hi - lo)
    return simpson_rule(lo, hi, q, omega=omega, features=features, breaks=breaks, mass=mass)


def _nodes(f: LineFunction, q: QuadSpec, omega=0.0, envelope=None):
    if not f.integrable:
        raise QuadratureError(f"{f.name} is not integrable under envelope {f.envelope}")
    x, w = _rule(envelope or f.envelope, q, f.support, f.features, f.breaks, omega)
    vals = f(x)
    f.envelope.check(x, vals, f.name)
    return x, w, vals


def integrate(f: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """``int f(x) dx`` to absolute accuracy ``q.tau``."""
    x, w, v = _nodes(f, q)
    return complex(np.dot(w, v))


def l1_norm(f: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> float:
    x, w, v = _nodes(f, q)
    return float(np.dot(w, np.abs(v)))


def first_moment(f: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> float:
    """``int |x| |f(x)| dx``."""
    x, w, v = _nodes(f, q, envelope=_moment_envelope(f.envelope, 1))
    return float(np.dot(w, np.abs(x) * np.abs(v)))


def _transform_sum(x, wv, xi):
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = np.empty(xi.size, dtype=np.complex128)
    chunk = max(1, 2_000_000 // max(x.size, 1))
    for s in range(0, xi.size, chunk):
        blk = xi[s : s + chunk]
        out[s : s + chunk] = np.exp(-1j * np.outer(blk, x)) @ wv
    return out


def fourier_transform(f: LineFunction, xi, q: QuadSpec = DEFAULT_QUAD):
    """Numerical transform ``int f(x) exp(-i xi x) dx``.

    ``xi`` may be a scalar or an array; the mesh resolves the largest ``|xi|``.
    Raises :class:`EnvelopeError` if ``f`` exceeds its envelope at a node.
    """
    scalar = np.ndim(xi) == 0
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    omega = float(np.max(np.abs(xi_arr))) if xi_arr.size else 0.0
    x, w, v = _nodes(f, q, omega=omega)
    out = _transform_sum(x, w * v, xi_arr)
    return complex(out[0]) if scalar else out


def hat_values(f: LineFunction, xi, q: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """``f^`` at ``xi``: closed form when registered, else memoized quadrature."""
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if f.hat is not None:
        return np.asarray(f.hat(xi), dtype=np.complex128) * np.ones(xi.shape)
    memo = f._memo.setdefault(q, {})
    missing = np.array(sorted({float(v) for v in xi} - memo.keys()))
    if missing.size:
        # one mesh per block of similar |xi| keeps the oscillation cap tight
        order = np.argsort(np.abs(missing))
        for blk in np.array_split(missing[order], max(1, missing.size // 512)):
            vals = fourier_transform(f, blk, q)
            for k, v in zip(blk, vals):
                memo.setdefault(float(k), complex(v))
    return np.array([memo[float(v)] for v in xi], dtype=np.complex128)


def _hat_envelope(f: LineFunction, q: QuadSpec) -> Envelope:
    if f.hat_envelope is not None:
        return f.hat_envelope
    if f.bounded_support:
        lo, hi = f.support
        return Envelope(f.envelope.C * (hi - lo), 0.0)
    return Envelope(f.envelope.l1_bound(), 0.0)


# --------------------------------------------------------------------------
# closed forms


def abel_kernel(eta: float, x):
    """``A_eta(x) = exp(-eta |x|)``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return np.exp(-eta * np.abs(x))


def abel_kernel_hat(eta: float, xi):
    """``2 eta / (xi**2 + eta**2)``, the transform of ``A_eta``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    xi = np.asarray(xi, dtype=np.float64)
    return 2.0 * eta / (xi**2 + eta**2)


def poisson_kernel_line(t: float, y):
    """``P_t(y) = t / (pi (y**2 + t**2))``."""
    if t <= 0:
        raise ValueError("t must be positive")
    y = np.asarray(y, dtype=np.float64)
    return t / (math.pi * (y**2 + t**2))


def poisson_sup_outside(t: float, delta: float) -> float:
    """``sup {P_t(y) : |y| >= delta}``, attained at ``|y| = delta``."""
    return float(poisson_kernel_line(t, delta))


def gaussian_hat(a: float, xi):
    """``sqrt(pi/a) exp(-xi**2 / (4a))``, the transform of ``exp(-a x**2)``."""
    if a <= 0:
        raise ValueError("a must be positive")
    xi = np.asarray(xi, dtype=np.float64)
    return math.sqrt(math.pi / a) * np.exp(-(xi**2) / (4.0 * a))


def indicator_hat(a: float, b: float, xi):
    """Transform of the indicator of ``[a, b]``; equals ``b - a`` at ``xi = 0``."""
    if not a < b:
        raise ValueError("need a < b")
    xi = np.asarray(xi, dtype=np.float64)
    half = 0.5 * (b - a)
    # (i/xi)(e^{-i xi b} - e^{-i xi a}) without the cancellation near xi = 0
    return (b - a) * np.sinc(xi * half / math.pi) * np.exp(-0.5j * xi * (a + b))


# --------------------------------------------------------------------------
# catalog


def _gaussian_envelope(a: float, scale: float = 1.0) -> Envelope:
    beta = 4.0 * math.sqrt(a)

    def neg(x):
        return -(math.exp(-a * x * x + beta * x) * (1.0 + x * x))

    grid = np.linspace(0.0, beta / (2 * a) + 12.0 / math.sqrt(a), 4001)
    vals = np.exp(-a * grid**2 + beta * grid) * (1.0 + grid**2)
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    C = max(float(vals[k]), -float(res.fun)) * (1.0 + 1e-9)
    return Envelope(scale * C, 2.0, beta)


def gaussian(a: float = 1.0) -> LineFunction:
    """``G_a(x) = exp(-a x**2)`` with closed-form transform and derivatives."""
    if a <= 0:
        raise ValueError("a must be positive")
    a = float(a)

    def deriv(x, k):
        # d^k/dx^k exp(-a x^2) = (-sqrt(a))^k H_k(sqrt(a) x) exp(-a x^2)
        s = math.sqrt(a)
        return (-s) ** k * special.eval_hermite(k, s * x) * np.exp(-a * x * x)

    b = 1.0 / (4.0 * a)
    return LineFunction(
        func=lambda x: np.exp(-a * x * x),
        envelope=_gaussian_envelope(a),
        smoothness="schwartz",
        features=((0.0, 1.0 / math.sqrt(a)),),
        hat=lambda xi: gaussian_hat(a, xi),
        hat_envelope=_gaussian_envelope(b, math.sqrt(math.pi / a)),
        hat_features=((0.0, 1.0 / math.sqrt(b)),),
        derivative=deriv,
        name=f"G_{a:g}",
    )


def abel(eta: float = 1.0) -> LineFunction:
    """``A_eta(x) = exp(-eta |x|)``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return LineFunction(
        func=lambda x: abel_kernel(eta, x),
        envelope=Envelope(1.0, 0.0, eta),
        smoothness="piecewise",
        breaks=(0.0,),
        features=((0.0, 1.0 / eta),),
        hat=lambda xi: abel_kernel_hat(eta, xi),
        hat_envelope=Envelope(2.0 * max(1.0 / eta, eta), 2.0),
        hat_features=((0.0, eta),),
        name=f"A_{eta:g}",
    )


def abel_hat_function(eta: float = 1.0) -> LineFunction:
    """``xi -> 2 eta / (xi**2 + eta**2)`` as a line function (its mass is ``2 pi``)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return LineFunction(
        func=lambda x: abel_kernel_hat(eta, x),
        envelope=Envelope(2.0 * max(1.0 / eta, eta), 2.0),
        smoothness="schwartz",
        features=((0.0, eta),),
        hat=lambda xi: _TWO_PI * abel_kernel(eta, xi),
        hat_envelope=Envelope(_TWO_PI, 0.0, eta),
        hat_breaks=(0.0,),
        name=f"hatA_{eta:g}",
    )


def poisson(t: float) -> LineFunction:
    """The line Poisson kernel ``P_t``."""
    if t <= 0:
        raise ValueError("t must be positive")
    return LineFunction(
        func=lambda y: poisson_kernel_line(t, y),
        envelope=Envelope(max(1.0 / t, t) / math.pi, 2.0),
        features=((0.0, t),),
        hat=lambda xi: abel_kernel(t, xi),
        hat_envelope=Envelope(1.0, 0.0, t),
        hat_breaks=(0.0,),
        name=f"P_{t:g}",
    )


def _compact_envelope(sup: float, radius: float, l: float = 4.0) -> Envelope:
    return Envelope(sup * (1.0 + radius**l), l)


def indicator(a: float, b: float) -> LineFunction:
    """Indicator of ``[a, b]``."""
    if not a < b:
        raise ValueError("need a < b")
    return LineFunction(
        func=lambda x: ((x >= a) & (x <= b)).astype(np.float64),
        envelope=_compact_envelope(1.0, max(abs(a), abs(b))),
        smoothness="piecewise",
        breaks=(a, b),
        features=((0.5 * (a + b), None),),
        support=(a, b),
        hat=lambda xi: indicator_hat(a, b, xi),
        hat_envelope=Envelope(b - a + 2.0, 1.0),
        name=f"1[{a:g},{b:g}]",
    )


def sign() -> LineFunction:
    """The sign function: bounded, not integrable."""
    return LineFunction(
        func=np.sign,
        envelope=Envelope(1.0, 0.0),
        smoothness="piecewise",
        breaks=(0.0,),
        name="sign",
    )


def exponential(a: float) -> LineFunction:
    """``x -> exp(i a x)``, bounded and not integrable."""
    return LineFunction(func=lambda x: np.exp(1j * a * x), envelope=Envelope(1.0, 0.0), name=f"e_{a:g}")


def bump(width: float = 1.0) -> LineFunction:
    """Smooth compactly supported bump ``exp(-1 / (1 - (x/width)**2))``."""
    w = float(width)

    def f(x):
        u = np.asarray(x) / w
        out = np.zeros(np.shape(u))
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    return LineFunction(
        func=f,
        envelope=_compact_envelope(math.exp(-1.0), w),
        smoothness="schwartz",
        breaks=(-w, w),
        features=((0.0, w),),
        support=(-w, w),
        name=f"bump_{w:g}",
    )


def mollified_abel(a: float = 1.0) -> LineFunction:
    """``A_1 * G_a``: the two-sided exponential smoothed by a Gaussian.

    Closed form through ``erfcx``; transform ``2 sqrt(pi/a) exp(-xi^2/4a) / (1 + xi^2)``.
    """
    sa = math.sqrt(a)
    c = 0.5 * math.sqrt(math.pi / a)

    def half(x):
        # int_0^inf exp(-y - a (x - y)^2) dy
        u = 1.0 / (2.0 * sa) - sa * x
        big = u > 0
        out = np.empty_like(x)
        out[big] = c * special.erfcx(u[big]) * np.exp(-a * x[big] ** 2)
        out[~big] = c * special.erfc(u[~big]) * np.exp(-x[~big] + 1.0 / (4.0 * a))
        return out

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return half(x) + half(-x)

    K = 2.0 * c * math.exp(1.0 / (4.0 * a)) * special.erfc(-1.0 / (2.0 * sa))
    return LineFunction(
        func=f,
        envelope=Envelope(K * (1.0 + 1e-9), 0.0, 1.0),
        smoothness="schwartz",
        features=((0.0, min(1.0, 1.0 / sa)),),
        hat=lambda xi: abel_kernel_hat(1.0, xi) * gaussian_hat(a, xi),
        hat_envelope=Envelope(2.0 * math.sqrt(math.pi / a), 2.0),
        name=f"A_1*G_{a:g}",
    )


# --------------------------------------------------------------------------
# convolution and inversion


def convolve_line(f: LineFunction, g: LineFunction, x: float, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """``(f * g)(x) = int f(y) g(x - y) dy``."""
    if not f.integrable:
        if not g.integrable:
            raise DomainError("convolution needs at least one integrable factor")
        f, g = g, f
    x = float(x)
    env = f.envelope.scaled(g.envelope.C)
    lo = max(f.support[0], x - g.support[1])
    hi = min(f.support[1], x - g.support[0])
    if not hi > lo:
        return 0j
    feats = tuple(f.features) + tuple((x - c, s) for c, s in g.features)
    brks = tuple(f.breaks) + tuple(x - b for b in g.breaks)
    y, w = _rule(env, q, (lo, hi), feats, brks)
    fy = f(y)
    f.envelope.check(y, fy, f.name)
    return complex(np.dot(w, fy * g(x - y)))


def _l1_envelope_bound(f: LineFunction) -> float:
    if f.bounded_support:
        return f.envelope.C * (f.support[1] - f.support[0])
    return f.envelope.l1_bound()


def convolution_function(f: LineFunction, g: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> LineFunction:
    """``f * g`` as a line function evaluated pointwise by quadrature.

    Splitting at ``|y| = |x|/2`` gives
    ``|f*g(x)| <= env_f(x/2) ||g||_1 + env_g(x/2) ||f||_1``, which is
    turned into a single envelope.  Every evaluation is a full quadrature,
    so integrals of the result are nested and best run with a looser ``tau``.
    """
    ef, eg = f.envelope, g.envelope
    l = min(ef.l, eg.l)
    C = 2.0**l * (ef.C * _l1_envelope_bound(g) + eg.C * _l1_envelope_bound(f))
    env = Envelope(C, l, 0.5 * min(ef.decay, eg.decay))

    def func(x):
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return np.array([convolve_line(f, g, float(v), q) for v in x.ravel()]).reshape(x.shape)

    hat = hat_env = None
    if f.hat is not None and g.hat is not None:
        fh, gh = f.hat, g.hat
        hat = lambda xi: fh(xi) * gh(xi)  # noqa: E731
        if f.hat_envelope is not None and g.hat_envelope is not None:
            a, b = f.hat_envelope, g.hat_envelope
            hat_env = Envelope(a.C * b.C, a.l + b.l, a.decay + b.decay)
    lo, hi = f.support[0] + g.support[0], f.support[1] + g.support[1]
    return LineFunction(
        func=func,
        envelope=env,
        smoothness="continuous",
        features=tuple(f.features) + tuple(g.features),
        support=(lo, hi),
        hat=hat,
        hat_envelope=hat_env,
        hat_features=tuple(f.hat_features) + tuple(g.hat_features),
        hat_breaks=tuple(f.hat_breaks) + tuple(g.hat_breaks),
        name=f"({f.name}*{g.name})",
    )


def sum_functions(fs: Sequence[LineFunction], coeffs: Sequence[complex] | None = None) -> LineFunction:
    """``sum c_k f_k`` with a common envelope.

    ``1/(1+|x|^l_k) <= 2/(1+|x|^l)`` for ``l = min l_k``, hence the factor 2.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    cs = list(coeffs) if coeffs is not None else [1.0] * len(fs)
    if len(fs) == 1:
        return fs[0] if cs[0] == 1 else fs[0].scaled(cs[0])
    l = min(f.envelope.l for f in fs)
    decay = min(f.envelope.decay for f in fs)
    C = 2.0 * sum(abs(c) * f.envelope.C for c, f in zip(cs, fs))
    funcs = [f.func for f in fs]
    hat = None
    if all(f.hat is not None for f in fs):
        hats = [f.hat for f in fs]
        hat = lambda xi: sum(c * h(xi) for c, h in zip(cs, hats))  # noqa: E731
    hat_env = None
    if all(f.hat_envelope is not None for f in fs):
        hl = min(f.hat_envelope.l for f in fs)
        hd = min(f.hat_envelope.decay for f in fs)
        hat_env = Envelope(2.0 * sum(abs(c) * f.hat_envelope.C for c, f in zip(cs, fs)), hl, hd)
    return LineFunction(
        func=lambda x: sum(c * np.asarray(fn(x), dtype=np.complex128) for c, fn in zip(cs, funcs)),
        envelope=Envelope(C, l, decay),
        smoothness="piecewise" if any(f.smoothness == "piecewise" for f in fs) else "continuous",
        breaks=tuple(b for f in fs for b in f.breaks),
        features=tuple(ft for f in fs for ft in f.features),
        support=(min(f.support[0] for f in fs), max(f.support[1] for f in fs)),
        hat=hat,
        hat_envelope=hat_env,
        hat_features=tuple(ft for f in fs for ft in f.hat_features),
        hat_breaks=tuple(b for f in fs for b in f.hat_breaks),
        name="+".join(f.name for f in fs),
    )


def abel_invert(f: LineFunction, x: float, eta: float, q: QuadSpec = DEFAULT_QUAD, route: str = "poisson") -> complex:
    """Abel mean of the inverse transform of ``f`` at ``x``.

    ``route="poisson"`` integrates ``f`` against ``P_eta(x - y)``;
    ``route="frequency"`` integrates ``f^(xi) A_eta(xi) exp(i xi x) / 2pi``.
    The two agree by Fubini and both tend to ``f(x)`` as ``eta -> 0``.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    if route == "poisson":
        return convolve_line(f, poisson(eta), x, q)
    if route != "frequency":
        raise ValueError(f"unknown route {route!r}")
    henv = _hat_envelope(f, q)
    env = replace(henv, C=henv.C / _TWO_PI, decay=henv.decay + eta)
    feats = tuple(f.hat_features) + ((0.0, 1.0 / eta),)
    xi, w = _rule(env, q, (-_INF, _INF), feats, tuple(f.hat_breaks) + (0.0,), omega=abs(x))
    vals = hat_values(f, xi, q)
    integrand = vals * np.exp(-eta * np.abs(xi) + 1j * xi * x) / _TWO_PI
    return complex(np.dot(w, integrand))


def summability_invert(
    f: LineFunction,
    Phi: LineFunction,
    eta: float,
    x: float,
    q: QuadSpec = DEFAULT_QUAD,
    route: str = "space",
) -> complex:
    """Summability mean with multiplier ``Phi(eta xi)``, ``Phi(0) = 1``.

    The space route integrates ``f(y) phi_eta(y - x)`` with
    ``phi_eta(w) = phi(w/eta) / (2 pi eta)`` and ``phi = Phi^``; the
    frequency route integrates ``f^(xi) Phi(eta xi) exp(i xi x) / 2pi``.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    p0 = complex(Phi(0.0))
    if abs(p0 - 1.0) > 1e-12:
        raise KernelNormalizationError(f"Phi(0) = {p0} != 1")
    if route == "frequency":
        # |Phi(eta xi)| <= C max(1, eta^-l) exp(-decay eta |xi|) / (1 + |xi|^l)
        penv = Phi.envelope
        C = penv.C * (max(1.0, eta ** (-penv.l)) if penv.l > 0 else 1.0)
        henv = _hat_envelope(f, q)
        env = Envelope(henv.C * C / _TWO_PI, henv.l + penv.l, henv.decay + penv.decay * eta)
        feats = tuple(f.hat_features) + tuple((c / eta, None if s is None else s / eta) for c, s in Phi.features)
        brks = tuple(f.hat_breaks) + tuple(b / eta for b in Phi.breaks)
        xi, w = _rule(env, q, (-_INF, _INF), feats, brks, omega=abs(x))
        integrand = hat_values(f, xi, q) * Phi(eta * xi) * np.exp(1j * xi * x) / _TWO_PI
        return complex(np.dot(w, integrand))
    if route != "space":
        raise ValueError(f"unknown route {route!r}")
    kernel = _dilated_hat(Phi, eta, q)
    return convolve_line(f, kernel.reflect(), x, q)


def _dilated_hat(Phi: LineFunction, eta: float, q: QuadSpec) -> LineFunction:
    """``w -> Phi^(w / eta) / (2 pi eta)``."""
    scale = 1.0 / (_TWO_PI * eta)
    if Phi.hat is not None:
        hat = Phi.hat
        func = lambda w: scale * hat(w / eta)  # noqa: E731
        henv = Phi.hat_envelope or _hat_envelope(Phi, q)
    else:
        func = lambda w: scale * hat_values(Phi, w / eta, q)  # noqa: E731
        henv = _hat_envelope(Phi, q)
    C = henv.C * (max(1.0, eta**henv.l) if henv.l > 0 else 1.0)
    return LineFunction(
        func=func,
        envelope=Envelope(scale * C, henv.l, henv.decay / eta),
        features=tuple((c * eta, None if s is None else s * eta) for c, s in Phi.hat_features),
        breaks=tuple(b * eta for b in Phi.hat_breaks),
        name=f"phi_{eta:g}",
    )


def generalized_transform(f: LineFunction, phi: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """``L_f(phi) = int f(x) phi^(x) dx`` for bounded ``f``.

    ``phi`` must carry a closed-form transform (or at least its envelope)
    so the tail of ``phi^`` can be bounded.
    """
    if phi.hat_envelope is None:
        raise ValueError("generalized_transform needs phi with a registered hat envelope")
    env = phi.hat_envelope.scaled(f.envelope.C)
    feats = tuple(phi.hat_features) + tuple(f.features)
    brks = tuple(phi.hat_breaks) + tuple(f.breaks)
    x, w = _rule(env, q, f.support, feats, brks)
    fx = f(x)
    f.envelope.check(x, fx, f.name)
    return complex(np.dot(w, fx * hat_values(phi, x, q)))


def _odd_quotient(phi: LineFunction, step: float = 1e-3):
    """``xi -> (phi(xi) - phi(-xi)) / xi`` extended by ``2 phi'(0)`` at zero."""
    h = step
    d0 = (-phi(2 * h) + 8 * phi(h) - 8 * phi(-h) + phi(-2 * h)) / (12 * h)

    def g(xi):
        xi = np.asarray(xi, dtype=np.float64)
        out = np.empty(xi.shape, dtype=np.complex128)
        z = xi == 0
        nz = ~z
        out[nz] = (phi(xi[nz]) - phi(-xi[nz])) / xi[nz]
        out[z] = 2.0 * complex(d0)
        return out

    return g


def _half_line_rule(phi: LineFunction, q: QuadSpec, a: float, env: Envelope, extra=()):
    R = q.cutoff(env) if not phi.bounded_support else max(abs(phi.support[0]), abs(phi.support[1]))
    feats = tuple(phi.features) + tuple((-c, s) for c, s in phi.features) + tuple(extra)
    brks = tuple(abs(b) for b in phi.breaks) + (1.0,)
    return simpson_rule(a, max(R, a + 1.0), q, features=feats, breaks=brks)


def sign_pv_transform(phi: LineFunction, eps: float = 0.0, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """Generalized transform of the sign function applied to ``phi``.

    With ``eps == 0`` this is the subtracted form
    ``2i [int_{|xi|<=1} (phi(xi) - phi(0))/xi + int_{|xi|>1} phi(xi)/xi]``;
    with ``eps > 0`` it is the cutoff integral ``2i int_{|xi|>eps} phi(xi)/xi``.
    Both fold the two half-lines into the odd quotient, so ``phi(0)`` cancels.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    g = _odd_quotient(phi)
    env = phi.envelope.scaled(2.0)
    x, w = _half_line_rule(phi, q, eps, env)
    vals = g(x)
    return complex(2j * np.dot(w, vals))


def sign_pv_regularized(phi: LineFunction, eta: float, q: QuadSpec = DEFAULT_QUAD) -> complex:
    """``int B_eta^(xi) phi(xi) dxi`` with ``B_eta^(xi) = 2 i xi / (eta^2 + xi^2)``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    env = phi.envelope.scaled(2.0 / max(eta, 1e-300) if eta < 1 else 2.0)
    x, w = _half_line_rule(phi, q, 0.0, env, extra=((0.0, eta),))
    vals = 2j * x / (eta**2 + x**2) * (phi(x) - phi(-x))
    return complex(np.dot(w, vals))


# --------------------------------------------------------------------------
# identities used as checks


def plancherel_defect(phi: LineFunction, q: QuadSpec = DEFAULT_QUAD, xi_max: float = 2.0**14) -> float:
    """``| int |phi^|^2 - 2 pi int |phi|^2 |`` with ``phi^`` computed numerically.

    The frequency cutoff ``Xi`` is doubled until ``|phi^|^2`` on
    ``Xi/2 <= |xi| <= Xi`` is below ``tau / Xi``.
    """
    return abs(_plancherel_pair(phi, phi, q, xi_max))


def plancherel_polarized_defect(phi1: LineFunction, phi2: LineFunction, q: QuadSpec = DEFAULT_QUAD) -> float:
    """Defect of ``int phi1^ conj(phi2^) = 2 pi int phi1 conj(phi2)``."""
    return abs(_plancherel_pair(phi1, phi2, q))


def _plancherel_pair(phi1, phi2, q, xi_max=2.0**14) -> complex:
    env = Envelope(phi1.envelope.C * phi2.envelope.C, phi1.envelope.l + phi2.envelope.l,
                   phi1.envelope.decay + phi2.envelope.decay)
    lo = max(phi1.support[0], phi2.support[0])
    hi = min(phi1.support[1], phi2.support[1])
    space = 0j
    if hi > lo:
        x, w = _rule(env, q, (lo, hi), tuple(phi1.features) + tuple(phi2.features),
                     tuple(phi1.breaks) + tuple(phi2.breaks))
        space = complex(np.dot(w, phi1(x) * np.conj(phi2(x))))
    # |xi| <= 8 first, then annuli Xi/2 <= |xi| <= Xi until the outer one is negligible
    freq = 0j
    lo_xi, Xi = 0.0, 8.0
    while True:
        prod = 0j
        peak = 0.0
        for a, b in ((-Xi, -lo_xi), (lo_xi, Xi)):
            xi, w = simpson_rule(a, b, q, features=((0.0, None),))
            h1 = _transform_blocks(phi1, xi, q)
            h2 = h1 if phi2 is phi1 else _transform_blocks(phi2, xi, q)
            p = h1 * np.conj(h2)
            prod += complex(np.dot(w, p))
            if lo_xi > 0:
                peak = max(peak, float(np.max(np.abs(p))))
        freq += prod
        if lo_xi > 0 and peak * Xi <= q.tau:
            return freq - _TWO_PI * space
        lo_xi, Xi = Xi, 2.0 * Xi
        if Xi > xi_max:
            raise QuadratureError("transform does not decay fast enough for the Plancherel check")


def _transform_blocks(f: LineFunction, xi: np.ndarray, q: QuadSpec) -> np.ndarray:
    """Numerical transform at many ``xi``, one mesh per block of similar ``|xi|``."""
    order = np.argsort(np.abs(xi))
    out = np.empty(xi.size, dtype=np.complex128)
    for blk in np.array_split(order, max(1, xi.size // 256)):
        out[blk] = fourier_transform(f, xi[blk], q)
    return out


_STENCILS = {
    1: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
    2: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
    3: ((-2, -1 / 2), (-1, 1.0), (1, -1.0), (2, 1 / 2)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _central_difference(fn, x, order: int, h: float):
    if order not in _STENCILS:
        raise ValueError("derivative order must be 1..4")
    return sum(c * fn(x + k * h) for k, c in _STENCILS[order]) / h**order


def _derivative_function(f: LineFunction, order: int, h: float) -> LineFunction:
    if f.derivative is not None:
        d = f.derivative
        func = lambda x: d(x, order)  # noqa: E731
    else:
        func = lambda x: _central_difference(f, x, order, h)  # noqa: E731
    weight = sum(abs(c) for _, c in _STENCILS[order]) / h**order
    env = _shift_envelope(f.envelope, 2 * h).scaled(weight)
    return replace(f, func=func, envelope=env, hat=None, hat_envelope=None, derivative=None,
                   name=f"{f.name}^({order})", _memo={})


def schwartz_relation_defect(f: LineFunction, l: int, xi: float, q: QuadSpec = DEFAULT_QUAD,
                             step: float = 1e-3) -> float:
    """Largest defect of the derivative/multiplication exchange identities at ``xi``.

    Checks ``d^l f^/dxi^l = (-i)^l F[x^l f]`` and
    ``xi^l f^(xi) = (-i)^l F[f^(l)]`` (forced by the ``exp(-i xi x)`` kernel:
    ``F[f'](xi) = i xi f^(xi)``).
    """
    xi = float(xi)
    d_hat = _central_difference(lambda s: hat_values(f, s, q)[0], xi, l, step)
    moment = replace(f, func=lambda x: x**l * f.func(x), envelope=_moment_envelope(f.envelope, l),
                     hat=None, hat_envelope=None, derivative=None, _memo={})
    lhs1 = complex(d_hat)
    rhs1 = (-1j) ** l * fourier_transform(moment, xi, q)
    deriv = _derivative_function(f, l, step)
    lhs2 = xi**l * complex(hat_values(f, xi, q)[0])
    rhs2 = (-1j) ** l * fourier_transform(deriv, xi, q)
    return max(abs(lhs1 - rhs1), abs(lhs2 - rhs2))


# --------------------------------------------------------------------------
# step functions


@dataclass(frozen=True)
class StepFunction:
    """``sum values[k] * 1[breakpoints[k], breakpoints[k+1])``."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        b = tuple(float(v) for v in self.breakpoints)
        if len(b) < 2 or any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing, at least two")
        if len(self.values) != len(b) - 1:
            raise ValueError("need one value per interval")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        b = np.asarray(self.breakpoints)
        k = np.searchsorted(b, x, side="right") - 1
        inside = (k >= 0) & (k < len(self.values))
        vals = np.asarray(self.values + (0j,))
        return np.where(inside, vals[np.clip(k, 0, len(self.values))], 0j)

    def hat(self, xi):
        xi = np.asarray(xi, dtype=np.float64)
        out = np.zeros(xi.shape, dtype=np.complex128)
        for (a, b), v in zip(zip(self.breakpoints, self.breakpoints[1:]), self.values):
            if v:
                out = out + v * indicator_hat(a, b, xi)
        return out

    def to_line_function(self, l: float = 4.0) -> LineFunction:
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        sup = max((abs(v) for v in self.values), default=0.0)
        return LineFunction(
            func=self,
            envelope=_compact_envelope(sup, max(abs(lo), abs(hi)), l),
            smoothness="piecewise",
            breaks=self.breakpoints,
            features=((0.5 * (lo + hi), None),),
            support=(lo, hi),
            hat=self.hat,
            hat_envelope=Envelope(sum(abs(v) for v in self.values) * (hi - lo + 2.0), 1.0),
            name="step",
        )

    def to_json(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "values": [[v.real, v.imag] for v in self.values],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StepFunction":
        return cls(tuple(doc["breakpoints"]), tuple(complex(re, im) for re, im in doc["values"]))


def _l1_distance(f: LineFunction, s: StepFunction, q: QuadSpec) -> float:
    lo, hi = s.breakpoints[0], s.breakpoints[-1]
    sup = max(abs(v) for v in s.values)
    extra = _compact_envelope(sup, max(abs(lo), abs(hi)), f.envelope.l) if f.envelope.l > 0 else Envelope(sup, 0.0)
    env = Envelope(f.envelope.C + extra.C * math.exp(f.envelope.decay * max(abs(lo), abs(hi))), f.envelope.l,
                   f.envelope.decay)
    x, w = _rule(env, q, f.support, f.features, tuple(f.breaks) + s.breakpoints)
    return float(np.dot(w, np.abs(f(x) - s(x))))


def step_approximate(f: LineFunction, eps: float, q: QuadSpec = DEFAULT_QUAD,
                     max_cells: int = 1 << 20) -> StepFunction:
    """Integrable step function within ``eps`` of ``f`` in ``L^1``.

    Midpoint values on a uniform partition of ``[-L, L]`` (``L`` from the
    envelope), refined until the ``L^1`` error, measured by quadrature, is
    below ``eps / 2``. Transforms then differ by at most the same amount.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if f.bounded_support:
        lo, hi = f.support
    else:
        L = f.envelope.cutoff(eps / 4.0)
        lo, hi = max(-L, f.support[0]), min(L, f.support[1])
    n = 16
    qq = replace(q, tau=min(q.tau, eps / 8.0))
    while n <= max_cells:
        edges = np.linspace(lo, hi, n + 1)
        edges = np.unique(np.concatenate([edges, [b for b in f.breaks if lo < b < hi]]))
        mids = 0.5 * (edges[:-1] + edges[1:])
        s = StepFunction(tuple(edges), tuple(f(mids)))
        if _l1_distance(f, s, qq) < eps / 2.0:
            return s
        n *= 2
    raise QuadratureError(f"no step approximation within {eps:g} using {max_cells} cells")

