"""JSON formats shared by the command line and the library.

============  ==============================================================
object        document
============  ==============================================================
coefficients  ``{"dim": n, "entries": [[[i1, ..., in], re, im], ...]}``
              (optional ``"degree"`` for one-sided power series)
grid samples  ``{"dim": n, "m": m, "samples": [[re, im], ...]}`` row-major
trig sum      ``[[xi, re, im], ...]``
line function ``{"catalog": "gaussian", "params": [1]}`` or
              ``{"expr": "exp(-x^2)", "envelope": [C, l, decay?]}``
measure       ``{"kind": "T", "dim": n, "atoms": [[[theta...], re, im], ...],
              "density": <coefficients>}`` (atoms given by angles) or
              ``{"kind": "R", "atoms": [[x, re, im], ...], "density": <line function>}``
metric space  ``{"points": [...], "dist": [[...]], "values": [...]}``
step function ``{"breakpoints": [...], "values": [[re, im], ...]}``
============  ==============================================================
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import line as _line
from .circle import CircleGrid, TrigPoly
from .measures import MeasureR, MeasureT
from .series import CoeffSeq, MultiSeq

__all__ = [
    "CATALOG",
    "catalog",
    "parse_catalog",
    "load_json",
    "grid_from_json",
    "line_function_from_json",
    "measure_from_json",
    "measure_to_json",
    "series_from_json",
    "series_to_json",
    "trig_from_json",
]

CATALOG = {
    "gaussian": (_line.gaussian, 1),
    "abel": (_line.abel, 1),
    "poisson": (_line.poisson, 1),
    "indicator": (_line.indicator, 2),
    "sign": (_line.sign, 0),
    "bump": (_line.bump, 1),
    "mollified_abel": (_line.mollified_abel, 1),
}


def catalog(name: str, *params: float) -> _line.LineFunction:
    """A built-in line function by name, e.g. ``catalog("gaussian", 1.0)``."""
    if name not in CATALOG:
        raise ValueError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}")
    ctor, arity = CATALOG[name]
    if len(params) != arity:
        raise ValueError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return ctor(*map(float, params))


def parse_catalog(text: str) -> _line.LineFunction:
    """``"gaussian 1"`` -> ``gaussian(1.0)``; parameters may use ``pi``."""
    name, *rest = text.split()
    return catalog(name, *(_number(v) for v in rest))


def _number(v) -> float:
    if isinstance(v, (int, float)):
        return float(v)
    s = str(v).strip().lower()
    if s in ("pi", "+pi"):
        return math.pi
    if s == "-pi":
        return -math.pi
    return float(Fraction(s)) if "/" in s else float(s)


def load_json(path) -> object:
    return json.loads(Path(path).read_text())


def line_function_from_json(doc: dict) -> _line.LineFunction:
    if "catalog" in doc:
        return catalog(doc["catalog"], *map(_number, doc.get("params", [])))
    if "expr" in doc:
        from .expr import to_line_function

        return to_line_function(doc["expr"], tuple(doc["envelope"]))
    raise ValueError("line function needs 'catalog' or 'expr'")


def trig_from_json(doc: dict) -> TrigPoly:
    return TrigPoly.from_json(doc)


def series_from_json(doc: dict):
    """``CoeffSeq`` when ``"degree"`` is given (dimension one), else ``MultiSeq``."""
    entries = [(tuple(idx), complex(re, im)) for idx, re, im in doc["entries"]]
    if "degree" in doc:
        if int(doc.get("dim", 1)) != 1:
            raise ValueError("one-sided series are one-dimensional")
        vals = {k[0]: (int(v.real) if v.imag == 0 and v.real.is_integer() else v) for k, v in entries}
        return CoeffSeq(vals, int(doc["degree"]))
    return MultiSeq(dict(entries), int(doc["dim"]))


def series_to_json(a) -> dict:
    if isinstance(a, CoeffSeq):
        return {
            "dim": 1,
            "degree": a.degree,
            "entries": [[[n], float(complex(v).real), float(complex(v).imag)] for n, v in sorted(a.coeffs.items())],
        }
    return {
        "dim": a.dim,
        "entries": [[list(k), float(complex(v).real), float(complex(v).imag)] for k, v in sorted(a.coeffs.items())],
    }


def measure_from_json(doc: dict):
    kind = doc.get("kind", "T")
    if kind == "T":
        n = int(doc.get("dim", 1))
        atoms = tuple(
            (tuple(np.exp(1j * np.asarray(theta, dtype=np.float64).reshape(-1))), complex(re, im))
            for theta, re, im in doc.get("atoms", [])
        )
        dens = doc.get("density")
        return MeasureT(n, atoms, TrigPoly.from_json(dens) if dens else None)
    if kind == "R":
        atoms = tuple((float(x), complex(re, im)) for x, re, im in doc.get("atoms", []))
        dens = doc.get("density")
        return MeasureR(atoms, line_function_from_json(dens) if dens else None)
    raise ValueError(f"unknown measure kind {kind!r}")


def measure_to_json(mu) -> dict:
    if isinstance(mu, MeasureT):
        doc = {
            "kind": "T",
            "dim": mu.n,
            "atoms": [[[float(np.angle(p)) for p in pt], w.real, w.imag] for pt, w in mu.atoms],
        }
        if mu.density is not None:
            doc["density"] = mu.density.to_json()
        return doc
    return {"kind": "R", "atoms": [[x, w.real, w.imag] for x, w in mu.atoms]}


def grid_from_json(doc: dict) -> CircleGrid:
    return CircleGrid.from_json(doc)
