"""Composite Simpson quadrature on graded meshes with envelope tail bounds.

Every integral over the line is split into a truncated part on ``[-R, R]``
and a tail that is bounded, not estimated, from a decay envelope

    |f(x)| <= C * exp(-decay * |x|) / (1 + |x|**l)        (l > 0)
    |f(x)| <= C * exp(-decay * |x|)                        (l == 0)

The cutoff ``R`` is chosen so the tail bound is at most ``tau / 2``.  Panels
have width ``h`` near each declared feature of the integrand and grow
geometrically (ratio ``1 + grading``) away from it; oscillatory integrands
cap the phase advance per panel so the Simpson error, about
``(omega w)**4 / 2880`` per unit mass, stays near ``tau / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import EnvelopeError, QuadratureError

__all__ = ["Envelope", "QuadSpec", "simpson_rule", "DEFAULT_QUAD"]

_R_MAX = 1e12


@dataclass(frozen=True)
class Envelope:
    """Decay bound ``C exp(-decay |x|) / (1 + |x|**l)``."""

    C: float
    l: float
    decay: float = 0.0

    def __post_init__(self):
        if self.C < 0 or self.l < 0 or self.decay < 0:
            raise ValueError(f"invalid envelope {self}")

    def __call__(self, x):
        ax = np.abs(np.asarray(x, dtype=np.float64))
        out = self.C * np.exp(-self.decay * ax)
        if self.l > 0:
            out = out / (1.0 + ax**self.l)
        return out

    @property
    def integrable(self) -> bool:
        return self.l > 1 or self.decay > 0

    def scaled(self, factor: float) -> "Envelope":
        return replace(self, C=self.C * abs(factor))

    def tail(self, R: float) -> float:
        """Upper bound for the integral of the envelope over ``|x| > R``."""
        if self.C == 0:
            return 0.0
        best = math.inf
        if self.l > 1:
            best = self.C * R ** (1.0 - self.l) / (self.l - 1.0)
        if self.decay > 0:
            denom = 1.0 + R**self.l if self.l > 0 else 1.0
            best = min(best, self.C * math.exp(-self.decay * R) / (self.decay * denom))
        return 2.0 * best

    def l1_bound(self) -> float:
        """Upper bound for the integral of the envelope over the whole line."""
        if self.C == 0:
            return 0.0
        best = math.inf
        if self.l > 1:
            best = self.C * 2.0 * math.pi / (self.l * math.sin(math.pi / self.l))
        if self.decay > 0:
            best = min(best, 2.0 * self.C / self.decay)
        return best

    def cutoff(self, budget: float) -> float:
        """Smallest ``R`` (to bisection accuracy) with ``tail(R) <= budget``."""
        if not self.integrable:
            raise QuadratureError(f"envelope {self} is not integrable")
        if self.tail(1.0) <= budget:
            lo, hi = 0.0, 1.0
        else:
            hi = 1.0
            while self.tail(hi) > budget:
                hi *= 2.0
                if hi > _R_MAX:
                    raise QuadratureError(f"no cutoff below {_R_MAX:g} meets tail budget {budget:g}")
            lo = hi / 2.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.tail(mid) <= budget:
                hi = mid
            else:
                lo = mid
        return hi

    def check(self, x, values, context: str = "function") -> None:
        env = self(x)
        values = np.asarray(values)
        bad = ~np.isfinite(values)
        if np.any(bad):
            w = float(np.asarray(x).ravel()[int(np.argmax(bad.ravel()))])
            raise EnvelopeError(f"{context} is not finite at x = {w!r}", witness=w)
        excess = np.abs(values) - env * (1.0 + 1e-9) - 1e-300
        if excess.size and np.max(excess) > 0:
            k = int(np.argmax(excess))
            w = float(np.asarray(x).ravel()[k])
            raise EnvelopeError(
                f"{context} exceeds its envelope at x = {w!r}: |f| = {abs(values.ravel()[k]):.6g} > {env.ravel()[k]:.6g}",
                witness=w,
            )


@dataclass(frozen=True)
class QuadSpec:
    """Resolution and tolerance for integrals over the line.

    Parameters
    ----------
    h : float
        Panel width near features of the integrand.
    R : float or None
        Cutoff radius. ``None`` derives it from the integrand envelope; an
        explicit value is rejected when its tail bound exceeds ``tau / 2``.
    tau : float
        Target absolute error of each integral.  The tail beyond ``R`` is
        bounded by ``tau / 2`` rigorously; the Simpson error on the graded
        mesh is controlled by ``h`` and ``grading`` and is typically of the
        same order, but not certified.
    grading : float
        Relative growth of panel widths away from features.
    osc : float
        Largest phase advance ``|omega| * width`` allowed per panel; the
        rule tightens it to ``(1440 tau / mass)**(1/4)`` when that is smaller.
    """

    h: float = 1.0 / 32.0
    R: float | None = None
    tau: float = 1e-9
    grading: float = 1.0 / 64.0
    osc: float = 0.25
    max_panels: int = 4_000_000

    def __post_init__(self):
        if self.h <= 0 or self.tau <= 0 or (self.R is not None and self.R <= 0):
            raise ValueError(f"invalid quadrature spec {self}")

    def cutoff(self, envelope: Envelope) -> float:
        if self.R is None:
            return envelope.cutoff(self.tau / 2.0)
        if envelope.tail(self.R) > self.tau / 2.0:
            raise QuadratureError(
                f"cutoff R = {self.R:g} leaves tail bound {envelope.tail(self.R):.3e} > tau/2 = {self.tau / 2:.3e}"
            )
        return self.R


DEFAULT_QUAD = QuadSpec()


def simpson_rule(
    a: float,
    b: float,
    q: QuadSpec = DEFAULT_QUAD,
    *,
    omega: float = 0.0,
    features: Sequence[tuple[float, float | None]] = ((0.0, None),),
    breaks: Iterable[float] = (),
    mass: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Simpson on a graded mesh of ``[a, b]``.

    ``features`` are ``(center, scale)`` pairs; panels near a center are no
    wider than ``min(h, 4 * grading * scale)``. ``breaks`` become panel edges.
    ``mass`` bounds the integral of ``|f|`` and sets the oscillation cap.
    """
    if not b > a:
        return np.zeros(0), np.zeros(0)
    feats = list(features) or [(0.0, None)]
    centers = np.array([c for c, _ in feats], dtype=np.float64)
    floors = np.array(
        [q.h if s is None else min(q.h, 4.0 * q.grading * s) for _, s in feats], dtype=np.float64
    )
    if omega:
        osc = min(q.osc, (1440.0 * q.tau / max(mass, 1e-300)) ** 0.25)
        cap = osc / abs(omega)
    else:
        cap = math.inf
    cap = min(cap, _R_MAX)
    pts = sorted({a, b} | {float(p) for p in breaks if a < p < b})
    pieces = []
    budget = q.max_panels
    for lo, hi in zip(pts[:-1], pts[1:]):
        try:
            e = _kernels.march_edges(lo, hi, centers, floors, q.grading, cap, budget)
        except OverflowError:
            raise QuadratureError(
                f"more than {q.max_panels} panels needed on [{a:g}, {b:g}] (omega = {omega:g}); loosen tau or h"
            ) from None
        budget -= e.size - 1
        pieces.append(e if not pieces else e[1:])
    edges = np.concatenate(pieces)
    w = np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = np.empty(2 * w.size + 1)
    nodes[0::2] = edges
    nodes[1::2] = mids
    weights = np.zeros_like(nodes)
    weights[1::2] = 4.0 * w / 6.0
    weights[0:-1:2] += w / 6.0
    weights[2::2] += w / 6.0
    return nodes, weights
