"""Coefficient algebra for one-sided, Laurent and multi-index power series.

Three immutable containers are provided:

``CoeffSeq``
    coefficients ``a_n`` of ``sum a_n z**n`` known exactly for ``0 <= n <= degree``.
    Products keep only the degrees that are fully determined by the inputs.
``LaurentSeq``
    finitely supported ``a_n`` for ``-radius <= n <= radius``.
``MultiSeq``
    finitely supported ``a_alpha`` indexed by integer tuples of length ``dim``.

Coefficients may be exact (``int`` / ``Fraction``) or floating (``float`` /
``complex``). Sums and products of exact coefficients stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Number
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, PoleError, SeriesTailError

__all__ = [
    "GeometricTail",
    "CoeffSeq",
    "LaurentSeq",
    "MultiSeq",
    "cauchy_product",
    "laurent_cauchy_product",
    "multi_cauchy_product",
    "eval_series",
    "geometric_closed_form",
    "differentiate",
    "radius_estimate",
    "exp_coefficients",
    "exp_terms",
    "exp_value",
    "l1_norm",
]


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _clean(coeffs: Mapping) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


@dataclass(frozen=True)
class GeometricTail:
    """Tail model ``|a_n| <= bound * ratio**n`` for every ``n`` beyond the degree."""

    bound: float
    ratio: float

    def __post_init__(self):
        if self.bound < 0 or self.ratio < 0:
            raise ValueError("tail bound and ratio must be nonnegative")

    def remainder(self, degree: int, modulus: float) -> float:
        q = self.ratio * modulus
        if q >= 1.0:
            return math.inf
        return self.bound * q ** (degree + 1) / (1.0 - q)


@dataclass(frozen=True)
class CoeffSeq:
    coeffs: Mapping[int, Number]
    degree: int
    tail: GeometricTail | None = None

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        clean = _clean(self.coeffs)
        for n in clean:
            if not isinstance(n, (int, np.integer)) or not 0 <= n <= self.degree:
                raise ValueError(f"index {n!r} outside [0, {self.degree}]")
        object.__setattr__(self, "coeffs", MappingProxyType({int(k): v for k, v in clean.items()}))

    @classmethod
    def from_list(cls, values: Sequence, degree: int | None = None, tail=None) -> "CoeffSeq":
        values = list(values)
        if degree is None:
            degree = len(values) - 1
        return cls(dict(enumerate(values[: degree + 1])), degree, tail)

    def __getitem__(self, n: int):
        return self.coeffs.get(n, 0)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.coeffs.values())

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.degree + 1, dtype=np.complex128)
        for n, v in self.coeffs.items():
            out[n] = complex(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return self.degree == other.degree and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))


@dataclass(frozen=True)
class LaurentSeq:
    coeffs: Mapping[int, Number]
    radius: int

    def __post_init__(self):
        clean = _clean(self.coeffs)
        for n in clean:
            if not -self.radius <= n <= self.radius:
                raise ValueError(f"index {n} outside [-{self.radius}, {self.radius}]")
        object.__setattr__(self, "coeffs", MappingProxyType({int(k): v for k, v in clean.items()}))

    def __getitem__(self, n: int):
        return self.coeffs.get(n, 0)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeq):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))


@dataclass(frozen=True)
class MultiSeq:
    coeffs: Mapping[tuple, Number]
    dim: int = field(default=1)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        clean = {}
        for k, v in _clean(self.coeffs).items():
            k = tuple(int(i) for i in k)
            if len(k) != self.dim:
                raise DimensionError(f"index {k} has dimension {len(k)}, expected {self.dim}")
            clean[k] = v
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    def __getitem__(self, alpha):
        return self.coeffs.get(tuple(alpha), 0)

    def __eq__(self, other):
        if not isinstance(other, MultiSeq):
            return NotImplemented
        return self.dim == other.dim and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))


def l1_norm(a) -> float:
    return math.fsum(abs(complex(v)) for v in a.coeffs.values())


def cauchy_product(a: CoeffSeq, b: CoeffSeq) -> CoeffSeq:
    """Cauchy product ``c_n = sum_{j<=n} a_j b_{n-j}``.

    Only degrees ``n <= min(a.degree, b.degree)`` are complete, so the result
    is truncated there.
    """
    deg = min(a.degree, b.degree)
    if a.exact and b.exact:
        c: dict[int, Number] = {}
        for i, u in a.coeffs.items():
            if i > deg:
                continue
            for j, v in b.coeffs.items():
                if i + j <= deg:
                    c[i + j] = c.get(i + j, 0) + u * v
        return CoeffSeq(c, deg)
    dense = _kernels.cauchy_truncated(a.to_array()[: deg + 1], b.to_array()[: deg + 1], deg + 1)
    return CoeffSeq({n: complex(v) for n, v in enumerate(dense) if v != 0}, deg)


def laurent_cauchy_product(a: LaurentSeq, b: LaurentSeq) -> LaurentSeq:
    """Doubly infinite Cauchy product of finitely supported sequences.

    Outside its window a ``LaurentSeq`` is zero, so every coefficient of the
    product on ``[-(Na+Nb), Na+Nb]`` is a finite, complete sum.
    """
    c: dict[int, Number] = {}
    for i, u in a.coeffs.items():
        for j, v in b.coeffs.items():
            c[i + j] = c.get(i + j, 0) + u * v
    return LaurentSeq(c, a.radius + b.radius)


def multi_cauchy_product(a: MultiSeq, b: MultiSeq) -> MultiSeq:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    c: dict[tuple, Number] = {}
    for alpha, u in a.coeffs.items():
        for beta, v in b.coeffs.items():
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            c[gamma] = c.get(gamma, 0) + u * v
    return MultiSeq(c, a.dim)


def geometric_closed_form(z: complex) -> complex:
    """``1 / (1 - z)``, the sum of the geometric series for ``|z| < 1``."""
    if z == 1:
        raise PoleError("geometric closed form has a pole at z = 1")
    return 1.0 / (1.0 - z)


def eval_series(a, z, tol: float | None = None) -> complex:
    """Evaluate a truncated series at ``z``.

    For a ``CoeffSeq`` carrying a ``GeometricTail`` the omitted remainder is
    bounded; ``SeriesTailError`` is raised when that bound exceeds ``tol`` or
    the tail does not converge at ``z``.
    """
    if isinstance(a, CoeffSeq):
        z = complex(z)
        if a.tail is not None:
            rem = a.tail.remainder(a.degree, abs(z))
            if not math.isfinite(rem):
                raise SeriesTailError(f"tail model diverges at |z| = {abs(z)}")
            if tol is not None and rem > tol:
                raise SeriesTailError(f"tail bound {rem:.3e} exceeds tolerance {tol:.3e}")
        acc = 0j
        for c in a.to_array()[::-1]:
            acc = acc * z + c
        return acc
    if isinstance(a, LaurentSeq):
        z = complex(z)
        if z == 0 and any(n < 0 for n in a.coeffs):
            raise PoleError("negative powers evaluated at z = 0")
        terms = [complex(v) * z**n for n, v in a.coeffs.items()]
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    if isinstance(a, MultiSeq):
        zs = [complex(w) for w in np.atleast_1d(z)]
        if len(zs) != a.dim:
            raise DimensionError(f"point has dimension {len(zs)}, expected {a.dim}")
        total = 0j
        for alpha, v in a.coeffs.items():
            term = complex(v)
            for zj, k in zip(zs, alpha):
                if zj == 0 and k < 0:
                    raise PoleError("negative power evaluated at a zero coordinate")
                term *= zj**k
            total += term
        return total
    raise TypeError(f"cannot evaluate {type(a).__name__}")


def differentiate(a: CoeffSeq) -> CoeffSeq:
    """Term-by-term derivative; ``result_n = (n + 1) a_{n+1}``."""
    deg = max(a.degree - 1, 0)
    coeffs = {n - 1: n * v for n, v in a.coeffs.items() if n >= 1}
    return CoeffSeq(coeffs, deg)


def radius_estimate(a: CoeffSeq, threshold: float = 1e-300) -> float:
    """Root-test estimate ``1 / max |a_n|**(1/n)`` over the last quarter of the window."""
    if a.degree < 8:
        raise ValueError("radius_estimate needs degree >= 8")
    start = a.degree - math.ceil(a.degree / 4) + 1
    best = 0.0
    for n in range(max(start, 1), a.degree + 1):
        v = a[n]
        if _is_exact(v):
            q = abs(Fraction(v))
            if q == 0 or q <= threshold:
                continue
            # exact logs: 1/n! underflows float long before n = 200
            log_m = math.log(q.numerator) - math.log(q.denominator)
        else:
            m = abs(complex(v))
            if m <= threshold:
                continue
            log_m = math.log(m)
        best = max(best, math.exp(log_m / n))
    return math.inf if best == 0.0 else 1.0 / best


def exp_coefficients(degree: int, exact: bool = True) -> CoeffSeq:
    vals = []
    f = 1
    for n in range(degree + 1):
        if n:
            f *= n
        vals.append(Fraction(1, f) if exact else 1.0 / f)
    return CoeffSeq.from_list(vals)


def exp_terms(modulus: float, tol: float = 1e-12) -> int:
    """Smallest ``m`` with ``10**|z| * |z|**m / m! < tol``."""
    log_target = math.log(tol) - modulus * math.log(10.0)
    m = 0
    while True:
        if modulus == 0.0:
            return 1
        if m * math.log(modulus) - math.lgamma(m + 1) < log_target and m > modulus:
            return m
        m += 1


def exp_value(z: complex, tol: float = 1e-12) -> complex:
    """Exponential summed from its power series.

    Terms are accumulated in 40-digit decimal arithmetic, so the only float
    error is the final rounding.
    """
    z = complex(z)
    m = exp_terms(abs(z), tol)
    with localcontext() as ctx:
        ctx.prec = 40
        zr, zi = Decimal(z.real), Decimal(z.imag)
        tr, ti = Decimal(1), Decimal(0)
        sr, si = Decimal(1), Decimal(0)
        for k in range(1, m + 1):
            tr, ti = (tr * zr - ti * zi) / k, (tr * zi + ti * zr) / k
            sr += tr
            si += ti
        return complex(float(sr), float(si))

