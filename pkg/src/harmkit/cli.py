"""Command line interface: ``harmkit <subcommand> [options]``.

Every subcommand prints one document, JSON ``{"meta": ..., "rows": [...]}``
or CSV with a header row, numbers rounded to 15 significant digits.  Exit
status is 0 on success, 1 when ``verify`` finds a failing check and 2 on
invalid input (message on stderr).
"""
from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import almost_periodic as ap
from . import circle, line, measures, metric
from . import io as hio
from .errors import HarmkitError
from .quadrature import DEFAULT_QUAD, QuadSpec

__all__ = ["main", "build_parser"]


class InputError(Exception):
    """Bad command line input; reported with exit status 2."""


def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return float(f"{v:.15g}")
    return v


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        raise TypeError("split complex values into _re/_im fields before output")
    return _num(obj)


def _cx(prefix: str, z) -> dict:
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _render(meta: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"meta": _clean(meta), "rows": _clean(rows)}, indent=1) + "\n"
    buf = _stdio.StringIO()
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if k not in r else _csv_cell(r[k]) for k in header])
    return buf.getvalue()


def _csv_cell(v):
    v = _num(v)
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, (list, tuple)):
        return " ".join(str(_csv_cell(x)) for x in v)
    return v


def _floats(text: str) -> list[float]:
    try:
        return [hio._number(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def _load_doc(spec: str):
    """Inline JSON, a path to a JSON file, or (returned as str) anything else."""
    s = spec.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    p = Path(s)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise InputError(f"no such file: {s}")
        return hio.load_json(p)
    return s


def _quad(args) -> QuadSpec:
    return QuadSpec(tau=args.tol, R=args.cutoff) if (args.tol or args.cutoff) else DEFAULT_QUAD


def _function(args, spec: str | None = None) -> line.LineFunction:
    """Line function from ``--expr/--envelope``, ``--catalog`` or a spec string."""
    if spec is None:
        if getattr(args, "expr", None):
            if not args.envelope:
                raise InputError("--expr needs --envelope C l [decay]")
            from .expr import to_line_function

            return to_line_function(args.expr, tuple(args.envelope), _quad(args))
        spec = getattr(args, "catalog", None)
        if not spec:
            raise InputError("give --catalog NAME [PARAMS] or --expr TEXT --envelope C l")
    doc = _load_doc(spec)
    if isinstance(doc, str):
        return hio.parse_catalog(doc)
    return hio.line_function_from_json(doc)


# --------------------------------------------------------------------------
# subcommands


def cmd_fourier_series(args):
    m = args.grid or 64
    N = 8 if args.degree is None else args.degree
    if args.input:
        doc = _load_doc(args.input)
        if isinstance(doc, str):
            raise InputError("--input must be a JSON document")
        grid = circle.CircleGrid.from_json(doc) if "samples" in doc else circle.TrigPoly.from_json(doc).sample(m)
    elif args.expr:
        from .expr import evaluate, parse

        tree = parse(args.expr)
        grid = circle.CircleGrid(1, m, evaluate(tree, 2 * np.pi * np.arange(m) / m))
    else:
        raise InputError("give --input FILE or --expr TEXT (a function of the angle x)")
    box = circle.coefficient_array(grid, N)
    rows = []
    for idx in np.ndindex(*box.shape):
        alpha = [int(i) - N for i in idx]
        rows.append({"index": alpha if grid.n > 1 else alpha[0], **_cx("a", box[idx])})
    meta = {"command": "fourier-series", "dim": grid.n, "grid": grid.m, "degree": N,
            "parseval_defect": circle.parseval_defect(grid, N)}
    return meta, rows, 0


def cmd_fourier_transform(args):
    f = _function(args)
    q = _quad(args)
    xi = np.linspace(args.xi_min, args.xi_max, args.points)
    vals = line.fourier_transform(f, xi, q)
    exact = f.hat(xi) if f.hat is not None else None
    rows = []
    for k, s in enumerate(xi):
        r = {"xi": s, **_cx("hat", vals[k])}
        if exact is not None:
            r.update(_cx("closed", exact[k]))
            r["abs_err"] = abs(vals[k] - exact[k])
        rows.append(r)
    meta = {"command": "fourier-transform", "function": f.name, "tau": q.tau}
    return meta, rows, 0


def cmd_invert(args):
    f = _function(args)
    q = _quad(args)
    etas = _floats(args.eta) if args.eta else [0.5, 0.1, 0.02, 1e-3]
    rows = []
    target = complex(f(args.at))
    for eta in etas:
        p = line.abel_invert(f, args.at, eta, q)
        fr = line.abel_invert(f, args.at, eta, q, route="frequency")
        rows.append({"eta": eta, **_cx("poisson", p), **_cx("frequency", fr),
                     "route_gap": abs(p - fr), "error": abs(p - target)})
    meta = {"command": "invert", "function": f.name, "x": args.at, **_cx("target", target)}
    return meta, rows, 0


def cmd_convolve(args):
    if not (args.f and args.g):
        raise InputError("convolve needs --f and --g")
    q = _quad(args)
    if args.kind == "circle":
        m = args.grid or 64
        a = circle.TrigPoly.from_json(_load_doc(args.f))
        b = circle.TrigPoly.from_json(_load_doc(args.g))
        fa, fb = a.sample(m), b.sample(m)
        h = circle.convolve_circle(fa, fb)
        N = args.degree if args.degree is not None else max(a.degree, b.degree)
        box = circle.coefficient_array(h, N)
        rows = []
        for idx in np.ndindex(*box.shape):
            alpha = tuple(int(i) - N for i in idx)
            prod = circle.fourier_coefficient(fa, alpha) * circle.fourier_coefficient(fb, alpha)
            rows.append({"index": list(alpha) if a.n > 1 else alpha[0], **_cx("c", box[idx]),
                         "product_gap": abs(box[idx] - prod)})
        return {"command": "convolve", "kind": "circle", "grid": m}, rows, 0
    if args.kind == "line":
        f, g = _function(args, args.f), _function(args, args.g)
        xs = _floats(args.at_list) if args.at_list else [0.0]
        rows = []
        for x in xs:
            v = line.convolve_line(f, g, x, q)
            w = line.convolve_line(g, f, x, q)
            rows.append({"x": x, **_cx("value", v), "commutator": abs(v - w)})
        return {"command": "convolve", "kind": "line", "f": f.name, "g": g.name}, rows, 0
    mu = hio.measure_from_json(_load_doc(args.f))
    nu = hio.measure_from_json(_load_doc(args.g))
    c = measures.convolve_measures(mu, nu, q)
    rows = []
    if isinstance(c, measures.MeasureT):
        N = args.degree if args.degree is not None else 4
        for k in range(-N, N + 1):
            alpha = (k,) * c.n if c.n == 1 else tuple([k] + [0] * (c.n - 1))
            rows.append({"index": k, **_cx("coefficient", measures.fourier_coefficient_measure(c, alpha))})
    else:
        xs = _floats(args.at_list) if args.at_list else [0.0, 1.0]
        for s in xs:
            rows.append({"xi": s, **_cx("transform", measures.fourier_transform_measure(c, s, q))})
    meta = {"command": "convolve", "kind": "measure", "atoms": len(c.atoms), "norm": measures.norm(c, q=q)}
    return meta, rows, 0


def cmd_mean(args):
    if not args.input:
        raise InputError("mean needs --input (TrigSum JSON [[xi, re, im], ...])")
    doc = _load_doc(args.input)
    if isinstance(doc, str):
        raise InputError("--input must be a JSON document")
    f = ap.TrigSum.from_json(doc)
    rows = [{"mode": "exact", **_cx("mean", ap.invariant_mean(f))}]
    if args.length:
        avg = ap.invariant_mean(f, "averaged", args.length)
        rows.append({"mode": "averaged", "L": args.length, **_cx("mean", avg),
                     "bound": ap.mean_error_bound(f, args.length)})
    meta = {"command": "mean", "terms": len(f.terms), "energy": ap.ap_inner_product(f, f).real}
    if args.eps:
        spec = ap.spectrum(f, args.eps)
        meta["spectrum"] = [[xi, a.real, a.imag] for xi, a in spec]
        meta["bessel_bound"] = ap.ap_inner_product(f, f).real / args.eps**2
    return meta, rows, 0


def cmd_kernels(args):
    xs = _floats(args.at_list) if args.at_list else [0.0]
    rows = []
    for eta in args.abel or []:
        for x in xs:
            rows.append({"kernel": "abel", "param": eta, "x": x, "value": float(line.abel_kernel(eta, x)),
                         "transform": float(line.abel_kernel_hat(eta, x))})
    for t in args.poisson or []:
        for x in xs:
            rows.append({"kernel": "poisson", "param": t, "x": x, "value": float(line.poisson_kernel_line(t, x)),
                         "transform": float(line.abel_kernel(t, x))})
    for a in args.gaussian or []:
        for x in xs:
            rows.append({"kernel": "gaussian", "param": a, "x": x, "value": math.exp(-a * x * x),
                         "transform": float(line.gaussian_hat(a, x))})
    if not rows:
        raise InputError("give at least one of --abel, --poisson, --gaussian")
    return {"command": "kernels", "columns": "transform is the closed-form transform at x"}, rows, 0


def cmd_regularize(args):
    if not args.input:
        raise InputError("regularize needs --input (metric space JSON with values)")
    doc = _load_doc(args.input)
    if not isinstance(doc, dict) or not {"points", "dist", "values"} <= doc.keys():
        raise InputError("metric space JSON needs points, dist and values")
    M = metric.FiniteMetricSpace.from_json(doc)
    f = np.asarray(doc["values"], dtype=np.float64)
    js = _floats(args.j) if args.j else [1.0]
    regs = {j: metric.lipschitz_regularize(f, M, j) for j in js}
    rows = []
    for k, p in enumerate(M.points):
        r = {"point": p, "f": f[k]}
        for j in js:
            r[f"f_{j:g}"] = regs[j][k]
        rows.append(r)
    meta = {"command": "regularize", "points": len(M),
            "lipschitz": {f"{j:g}": metric.check_lipschitz(regs[j], M, j)[0] for j in js}}
    return meta, rows, 0


def cmd_verify(args):
    from .verify import run_battery

    checks = run_battery(args.seed)
    rows = [{"group": g, "check": n, "value": v, "bound": b, "pass": ok} for g, n, v, b, ok in checks]
    failed = sum(not ok for *_, ok in checks)
    meta = {"command": "verify", "seed": args.seed, "checks": len(checks), "failed": failed}
    return meta, rows, 1 if failed else 0


COMMANDS = {
    "fourier-series": cmd_fourier_series,
    "fourier-transform": cmd_fourier_transform,
    "invert": cmd_invert,
    "convolve": cmd_convolve,
    "mean": cmd_mean,
    "kernels": cmd_kernels,
    "regularize": cmd_regularize,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--grid", type=int, help="samples per axis on T^n (power of two >= 16)")
    common.add_argument("--tol", type=float, help="absolute quadrature tolerance tau")
    common.add_argument("--cutoff", type=float, help="explicit quadrature cutoff radius R")
    common.add_argument("--eta", help="comma-separated eta values")
    common.add_argument("--radius", type=float, help="interior radius r")
    common.add_argument("--degree", type=int, help="degree N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the document here instead of stdout")

    fn = _Parser(add_help=False)
    fn.add_argument("--catalog", help='built-in function, e.g. "gaussian 1", "abel 0.5", "indicator -1 1"')
    fn.add_argument("--expr", help="expression in x")
    fn.add_argument("--envelope", type=float, nargs="+", metavar="C l [decay]")

    p = _Parser(prog="harmkit", description="Fourier analysis toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("fourier-series", parents=[common], help="coefficients and Parseval defect")
    s.add_argument("--input")
    s.add_argument("--expr")
    s = sub.add_parser("fourier-transform", parents=[common, fn], help="transform on a xi grid")
    s.add_argument("--xi-min", type=float, default=-10.0)
    s.add_argument("--xi-max", type=float, default=10.0)
    s.add_argument("--points", type=int, default=101)
    s = sub.add_parser("invert", parents=[common, fn], help="Abel inversion sweep over eta")
    s.add_argument("--at", type=float, default=0.0)
    s = sub.add_parser("convolve", parents=[common], help="convolution on T^n or R, or of measures")
    s.add_argument("--kind", choices=("circle", "line", "measure"), default="line")
    s.add_argument("--f")
    s.add_argument("--g")
    s.add_argument("--at", dest="at_list", help="comma-separated evaluation points")
    s = sub.add_parser("mean", parents=[common], help="invariant mean and spectrum of a TrigSum")
    s.add_argument("--input")
    s.add_argument("--length", "-L", type=float, help="averaging half-length L")
    s.add_argument("--eps", type=float)
    s = sub.add_parser("kernels", parents=[common], help="closed-form kernel tables")
    s.add_argument("--abel", type=float, action="append")
    s.add_argument("--poisson", type=float, action="append")
    s.add_argument("--gaussian", type=float, action="append")
    s.add_argument("--at", dest="at_list", help="comma-separated evaluation points")
    s = sub.add_parser("regularize", parents=[common], help="Lipschitz inf-convolution")
    s.add_argument("--input")
    s.add_argument("--j", help="comma-separated j values")
    sub.add_parser("verify", parents=[common], help="run the invariant battery")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        meta, rows, code = COMMANDS[args.command](args)
        text = _render(meta, rows, args.format)
    except KeyError as exc:
        print(f"harmkit: error: missing key {exc}", file=sys.stderr)
        return 2
    except (InputError, HarmkitError, ValueError, TypeError, OSError) as exc:
        print(f"harmkit: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
