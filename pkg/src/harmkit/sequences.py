"""Finitely supported families on ``Z^n``: p-norms, Hölder, projections.

``p`` may be any positive float or ``math.inf`` (a distinguished value, not
a large float).  For ``0 < p < 1`` :func:`lp_norm` is a quasi-norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, ExponentError, OrthonormalityError

__all__ = [
    "IndexedFamily",
    "OrthonormalSet",
    "lp_norm",
    "holder_check",
    "inner_product",
    "project",
    "bessel_defect",
    "young_gap",
]

GRAM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class IndexedFamily:
    """Immutable finite map ``Z^n -> C``; zero entries are dropped."""

    n: int
    entries: Mapping[tuple, complex]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("dimension must be >= 1")
        clean = {}
        for k, v in self.entries.items():
            k = (int(k),) if np.ndim(k) == 0 else tuple(int(i) for i in k)
            if len(k) != self.n:
                raise DimensionError(f"index {k} has dimension {len(k)}, expected {self.n}")
            if v != 0:
                clean[k] = complex(v)
        object.__setattr__(self, "entries", MappingProxyType(clean))

    @classmethod
    def from_vector(cls, values: Sequence[complex]) -> "IndexedFamily":
        """Family on ``{0, ..., len-1}`` in dimension one."""
        return cls(1, {(i,): v for i, v in enumerate(values)})

    @classmethod
    def delta(cls, alpha, n: int | None = None) -> "IndexedFamily":
        alpha = (int(alpha),) if np.ndim(alpha) == 0 else tuple(alpha)
        return cls(n or len(alpha), {alpha: 1.0})

    def __getitem__(self, alpha) -> complex:
        alpha = (alpha,) if np.ndim(alpha) == 0 else tuple(alpha)
        return self.entries.get(alpha, 0j)

    def __eq__(self, other):
        if not isinstance(other, IndexedFamily):
            return NotImplemented
        return self.n == other.n and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))

    def _merge(self, other: "IndexedFamily", op) -> "IndexedFamily":
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        keys = set(self.entries) | set(other.entries)
        return IndexedFamily(self.n, {k: op(self[k], other[k]) for k in keys})

    def __add__(self, other):
        return self._merge(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._merge(other, lambda x, y: x - y)

    def __mul__(self, c):
        if isinstance(c, IndexedFamily):
            return self._merge(c, lambda x, y: x * y)
        return IndexedFamily(self.n, {k: c * v for k, v in self.entries.items()})

    __rmul__ = __mul__

    @property
    def support(self) -> frozenset:
        return frozenset(self.entries)

    def abs_values(self) -> np.ndarray:
        return np.abs(np.fromiter(self.entries.values(), dtype=np.complex128, count=len(self.entries)))

    def to_json(self) -> dict:
        return {"dim": self.n, "entries": [[list(k), v.real, v.imag] for k, v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, doc: dict) -> "IndexedFamily":
        return cls(int(doc["dim"]), {tuple(i): complex(re, im) for i, re, im in doc["entries"]})


def lp_norm(a: IndexedFamily, p: float) -> float:
    """``(sum |a_alpha|^p)^(1/p)``, or ``max |a_alpha|`` for ``p = inf``.

    Entries are scaled by the largest modulus first, which keeps the sum in
    ``[1, #support]`` and avoids overflow for large or small ``p``.
    """
    if not p > 0:
        raise ExponentError(f"p must be positive, got {p}")
    m = a.abs_values()
    if m.size == 0:
        return 0.0
    top = float(m.max())
    if p == math.inf:
        return top
    s = math.fsum((m / top) ** p)
    return top * s ** (1.0 / p)


def _recip(p: float) -> float:
    return 0.0 if p == math.inf else 1.0 / p


def holder_check(a: IndexedFamily, b: IndexedFamily, p: float, q: float, r: float) -> dict:
    """``||a b||_r <= ||a||_p ||b||_q`` with ``1/r = 1/p + 1/q``."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    for e in (p, q, r):
        if not e > 0:
            raise ExponentError(f"exponents must be positive, got {e}")
    lhs_e, rhs_e = _recip(r), _recip(p) + _recip(q)
    if abs(lhs_e - rhs_e) > 1e-12 * max(1.0, abs(rhs_e)):
        raise ExponentError(f"1/{r} != 1/{p} + 1/{q}")
    lhs = lp_norm(a * b, r)
    rhs = lp_norm(a, p) * lp_norm(b, q)
    return {"lhs": lhs, "rhs": rhs, "ok": lhs <= rhs + 1e-10 * max(1.0, rhs)}


def inner_product(a: IndexedFamily, b: IndexedFamily) -> complex:
    """``<a, b> = sum a_alpha conj(b_alpha)``."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    common = a.support & b.support
    terms = [a[k] * b[k].conjugate() for k in common]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


@dataclass(frozen=True, eq=False)
class OrthonormalSet:
    """Families with Gram matrix within ``GRAM_TOL`` of the identity."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(self.vectors)
        if vecs and len({v.n for v in vecs}) != 1:
            raise DimensionError("vectors have different dimensions")
        for i, u in enumerate(vecs):
            for j in range(i, len(vecs)):
                g = inner_product(u, vecs[j])
                target = 1.0 if i == j else 0.0
                if abs(g - target) > GRAM_TOL:
                    raise OrthonormalityError(f"Gram entry ({i}, {j}) = {g}", entry=(i, j), value=g)
        object.__setattr__(self, "vectors", vecs)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def project(v: IndexedFamily, U: OrthonormalSet) -> IndexedFamily:
    """``P(v) = sum <v, u_j> u_j``."""
    out = IndexedFamily(v.n, {})
    for u in U:
        out = out + inner_product(v, u) * u
    return out


def bessel_defect(v: IndexedFamily, U: OrthonormalSet) -> float:
    """``||v||^2 - sum |<v, u_j>|^2``; equals ``||v - P(v)||^2``."""
    return lp_norm(v, 2) ** 2 - math.fsum(abs(inner_product(v, u)) ** 2 for u in U)


def young_gap(x: float, y: float, p: float) -> float:
    """``x^p/p + y^q/q - x y`` with ``1/p + 1/q = 1``; nonnegative for ``x, y >= 0``."""
    if not p > 1:
        raise ExponentError("need p > 1")
    q = p / (p - 1.0)
    return x**p / p + y**q / q - x * y
