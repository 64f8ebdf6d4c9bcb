"""Finite metric spaces, Lipschitz regularization, and ultrametric symbol sequences."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError, ExponentError

__all__ = [
    "FiniteMetricSpace",
    "lipschitz_regularize",
    "check_lipschitz",
    "regularization_threshold",
    "snowflake_check",
    "SymbolSequence",
    "ultrametric_distance",
    "in_ball",
    "binary_to_unit",
    "binary_to_cantor",
    "cantor_bilipschitz_check",
    "prefix_net",
]


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labels with a distance matrix, validated on construction."""

    points: tuple
    dist: np.ndarray

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64)
        n = len(self.points)
        if d.shape != (n, n):
            raise DimensionError(f"distance matrix has shape {d.shape}, expected ({n}, {n})")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise DomainError("distances must be finite and nonnegative")
        if np.any(np.diag(d) != 0):
            raise DomainError("d(x, x) must vanish")
        if not np.array_equal(d, d.T):
            raise DomainError("distance matrix is not symmetric")
        off = d[~np.eye(n, dtype=bool)]
        if off.size and off.min() <= 0:
            raise DomainError("distinct points must have positive distance")
        scale = max(1.0, float(d.max()) if d.size else 1.0)
        for j in range(n):
            # d(i, k) <= d(i, j) + d(j, k) for all i, k
            if np.any(d > d[:, j][:, None] + d[j, :][None, :] + 1e-12 * scale):
                i, k = np.argwhere(d > d[:, j][:, None] + d[j, :][None, :] + 1e-12 * scale)[0]
                raise DomainError(f"triangle inequality fails for ({i}, {j}, {k})")
        d.setflags(write=False)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "dist", d)

    def __len__(self):
        return len(self.points)

    @classmethod
    def from_coordinates(cls, coords, labels: Sequence[Hashable] | None = None) -> "FiniteMetricSpace":
        """Euclidean distances between rows of ``coords``."""
        x = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        d = np.sqrt(np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1))
        d = 0.5 * (d + d.T)
        np.fill_diagonal(d, 0.0)
        return cls(tuple(labels) if labels is not None else tuple(range(len(x))), d)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int = 20, dim: int = 2) -> "FiniteMetricSpace":
        return cls.from_coordinates(rng.uniform(-1.0, 1.0, size=(n, dim)))

    def to_json(self, values: Sequence[float] | None = None) -> dict:
        doc = {"points": list(self.points), "dist": self.dist.tolist()}
        if values is not None:
            doc["values"] = list(map(float, values))
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteMetricSpace":
        return cls(tuple(doc["points"]), np.asarray(doc["dist"], dtype=np.float64))


def _values(f, M: FiniteMetricSpace) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (len(M),):
        raise DimensionError(f"need one value per point ({len(M)}), got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise DomainError("values must be finite")
    return f


def lipschitz_regularize(f, M: FiniteMetricSpace, j: float) -> np.ndarray:
    """``f_j(x) = min_y f(y) + j d(x, y)``, the largest ``j``-Lipschitz minorant of ``f``."""
    if not j > 0:
        raise ValueError("j must be positive")
    return np.asarray(_kernels.min_plus(_values(f, M), M.dist, float(j)))


def check_lipschitz(f, M: FiniteMetricSpace, C: float, a: float = 1.0) -> tuple[bool, tuple | None]:
    """Whether ``|f(x) - f(y)| <= C d(x, y)^a`` on all pairs; otherwise the worst pair."""
    if C < 0:
        raise ValueError("C must be nonnegative")
    if not 0 < a <= 1:
        raise ExponentError("order a must lie in (0, 1]")
    f = _values(f, M)
    scale = max(1.0, float(np.max(np.abs(f))) if f.size else 1.0)
    excess, i, k = _kernels.lipschitz_worst(f, M.dist, float(C), float(a))
    if excess <= 1e-12 * scale:
        return True, None
    return False, (M.points[i], M.points[k])


def regularization_threshold(f, M: FiniteMetricSpace, x: int) -> float:
    """Smallest ``j`` with ``f_j(x) = f(x)``: ``max(0, max_y (f(x) - f(y)) / d(x, y))``."""
    f = _values(f, M)
    others = np.arange(len(M)) != x
    if not others.any():
        return 0.0
    return max(0.0, float(np.max((f[x] - f[others]) / M.dist[x, others])))


def snowflake_check(r: float, t: float, a: float) -> bool:
    """``(r + t)^a <= r^a + t^a`` for ``r, t >= 0`` and ``0 < a <= 1``."""
    if r < 0 or t < 0:
        raise ValueError("r and t must be nonnegative")
    if not 0 < a <= 1:
        raise ExponentError("order a must lie in (0, 1]")
    lhs = (r + t) ** a
    rhs = r**a + t**a
    return lhs <= rhs * (1.0 + 4e-16) + 1e-300


@dataclass(frozen=True)
class SymbolSequence:
    """Infinite sequence given by a finite prefix followed by a constant ``pad`` symbol.

    Equality and distances are decided from prefixes: beyond
    ``len(prefix)`` every coordinate equals ``pad``.
    """

    prefix: tuple
    pad: Hashable = 0

    def __post_init__(self):
        p = tuple(self.prefix)
        if len(p) < 1:
            raise ValueError("prefix must have length >= 1")
        object.__setattr__(self, "prefix", p)

    def __getitem__(self, j: int):
        return self.prefix[j] if j < len(self.prefix) else self.pad

    def __eq__(self, other):
        if not isinstance(other, SymbolSequence):
            return NotImplemented
        return _first_difference(self, other) is None

    def __hash__(self):
        p = list(self.prefix)
        while p and p[-1] == self.pad:
            p.pop()
        return hash((tuple(p), self.pad))

    @classmethod
    def random(cls, rng: np.random.Generator, length: int, alphabet: Sequence = (0, 1)) -> "SymbolSequence":
        return cls(tuple(alphabet[int(i)] for i in rng.integers(0, len(alphabet), size=length)))


def _first_difference(x: SymbolSequence, y: SymbolSequence) -> int | None:
    n = max(len(x.prefix), len(y.prefix))
    for j in range(n):
        if x[j] != y[j]:
            return j
    return None if x.pad == y.pad else n


def ultrametric_distance(x: SymbolSequence, y: SymbolSequence, rho: float = 0.5) -> float:
    """``rho^l`` where ``l`` is the length of the common prefix; ``0`` when ``x = y``."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    l = _first_difference(x, y)
    return 0.0 if l is None else rho**l


def in_ball(x: SymbolSequence, center: SymbolSequence, l: int, rho: float = 0.5) -> bool:
    """Whether ``d_rho(x, center) <= rho^l``; equivalently the first ``l`` symbols agree."""
    return ultrametric_distance(x, center, rho) <= rho**l


def _binary(x: SymbolSequence) -> list[int]:
    syms = list(x.prefix) + [x.pad]
    if any(s not in (0, 1) for s in syms):
        raise DomainError("binary alphabet {0, 1} required")
    return [int(s) for s in x.prefix]


def binary_to_unit(x: SymbolSequence, exact: bool = False):
    """``sum_j x_j 2^-j`` (``j >= 1``), including the padded tail ``pad * 2^-m``."""
    digits = _binary(x)
    total = sum(Fraction(d, 2 ** (j + 1)) for j, d in enumerate(digits))
    total += Fraction(int(x.pad), 2 ** len(digits))
    return total if exact else float(total)


def binary_to_cantor(x: SymbolSequence, exact: bool = False):
    """``sum_j 2 x_j 3^-j``, a point of the middle-thirds Cantor set."""
    digits = _binary(x)
    total = sum(Fraction(2 * d, 3 ** (j + 1)) for j, d in enumerate(digits))
    total += Fraction(int(x.pad), 3 ** len(digits))
    return total if exact else float(total)


def cantor_bilipschitz_check(length: int = 16, pairs: int = 200_000, seed: int = 0) -> dict:
    """Check ``|c(x) - c(y)| <= 2 d`` and ``d <= 3 |c(x) - c(y)|`` with ``d = d_{1/3}``.

    Also checks that ``binary_to_unit`` is 1-Lipschitz for ``d_{1/2}``.  Words
    of the given length are encoded as integers (first symbol = top bit); all
    pairs are checked when there are at most ``2^22`` of them, otherwise a
    seeded random sample of ``pairs`` pairs.
    """
    L = int(length)
    j = np.arange(1, L + 1)
    bits = (np.arange(2**L)[:, None] >> (L - j)[None, :]) & 1 if 4**L <= 1 << 22 else None
    if bits is not None:
        iu, ku = np.triu_indices(2**L, k=1)
    else:
        rng = np.random.default_rng(seed)
        iu = rng.integers(0, 2**L, size=pairs)
        ku = rng.integers(0, 2**L, size=pairs)
        keep = iu != ku
        iu, ku = iu[keep], ku[keep]

    def digits(w):
        return (w[:, None] >> (L - j)[None, :]) & 1

    def values(w):
        dg = digits(w)
        return dg @ (2.0 * 3.0 ** (-j)), dg @ (2.0 ** (-j))

    ci, ui = values(iu)
    ck, uk = values(ku)
    # first differing position (0-based) from the top set bit of the xor
    l = L - np.frexp((iu ^ ku).astype(np.float64))[1]
    d3 = 3.0 ** (-l)
    gap = np.abs(ci - ck)
    fwd = float(np.max(gap / d3))
    inv = float(np.max(d3 / gap))
    unit = float(np.max(np.abs(ui - uk) * 2.0**l))
    slack = 1.0 + 1e-12
    return {
        "forward": fwd,
        "inverse": inv,
        "unit": unit,
        "pairs": int(iu.size),
        "ok": fwd <= 2 * slack and inv <= 3 * slack and unit <= slack,
    }


def prefix_net(alphabet: Sequence, l: int, pad=None) -> list[SymbolSequence]:
    """All ``|A|^l`` words of length ``l``: every sequence lies within ``rho^l`` of one of them."""
    pad = alphabet[0] if pad is None else pad
    return [SymbolSequence(w, pad) for w in itertools.product(alphabet, repeat=l)]
