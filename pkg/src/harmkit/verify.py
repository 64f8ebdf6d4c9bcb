"""The invariant battery run by ``harmkit verify``.

Each check returns ``(group, name, value, bound, passed)``.  Everything is
driven by one seeded generator, so the report is reproducible byte for byte.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import almost_periodic as ap
from . import circle, expr, line, measures, metric, sequences, series
from .quadrature import Envelope

__all__ = ["Check", "run_battery", "GROUPS", "random_expr"]

Check = tuple  # (group, name, value, bound, passed)


def _ok(group, name, value, bound, passed=None) -> Check:
    value = float(value)
    return (group, name, value, float(bound), bool(value <= bound if passed is None else passed))


def _series(rng) -> Iterator[Check]:
    a, b = (int(v) for v in rng.integers(-3, 4, size=2))
    ea = series.CoeffSeq.from_list([Fraction(a) ** n * series.exp_coefficients(30)[n] for n in range(31)])
    eb = series.CoeffSeq.from_list([Fraction(b) ** n * series.exp_coefficients(30)[n] for n in range(31)])
    eab = series.CoeffSeq.from_list([Fraction(a + b) ** n * series.exp_coefficients(30)[n] for n in range(31)])
    yield _ok("series", "exp_product_exact", 0.0 if series.cauchy_product(ea, eb) == eab else 1.0, 0.0)
    z = complex(*rng.uniform(-0.35, 0.35, size=2))
    g = series.CoeffSeq.from_list([1] * 61, tail=series.GeometricTail(1.0, 1.0))
    yield _ok("series", "geometric_eval", abs(series.eval_series(g, z, tol=1e-12) - series.geometric_closed_form(z)), 1e-12)
    yield _ok("series", "exp_radius_ge_10", -series.radius_estimate(series.exp_coefficients(40)), -10.0)
    w = complex(*rng.uniform(-3, 3, size=2))
    yield _ok("series", "exp_value", abs(series.exp_value(w) - cmath.exp(w)) / max(1.0, abs(cmath.exp(w))), 1e-12)


def _circle(rng) -> Iterator[Check]:
    m = 64
    spec = np.array([circle.CircleGrid.from_function(lambda w, l=l: w**l, 1, m).spectrum for l in range(-15, 16)])
    idx = np.arange(-15, 16) % m
    yield _ok("circle", "orthonormality", np.max(np.abs(spec[:, idx] - np.eye(31))), 1e-13)
    p = circle.TrigPoly.random(rng, 1, 10)
    yield _ok("circle", "parseval", abs(circle.parseval_defect(p.sample(m), 10)), 1e-12)
    for n, mm, deg in ((1, 64, 12), (2, 32, 6)):
        f = circle.TrigPoly.random(rng, n, deg).sample(mm)
        g = circle.TrigPoly.random(rng, n, deg).sample(mm)
        h = circle.convolve_circle(f, g)
        yield _ok("circle", f"convolution_theorem_T{n}", np.max(np.abs(h.spectrum - f.spectrum * g.spectrum)), 1e-11)
    # bounded parameters keep the derivatives, hence the recovery error, of order one
    c = rng.uniform(-1.0, 1.0, 3)
    sm = circle.CircleGrid.from_function(
        lambda w: np.exp(c[0] * np.cos(np.angle(w))) * np.sin(2 * np.angle(w) + c[1]) + c[2], 1, 64
    )
    nodes = circle.CircleGrid.nodes(1, 64)[0]
    errs = [float(np.max(np.abs(circle._extend_many(sm, r * nodes) - sm.values))) for r in (0.9, 0.99, 0.999)]
    yield _ok("circle", "boundary_recovery_0.999", errs[2], 1e-2, errs[0] > errs[1] > errs[2] and errs[2] < 1e-2)
    worst = -math.inf
    for _ in range(10):
        vals = circle.TrigPoly.random(rng, 1, 6).sample(64).values.real
        rep = circle.max_principle_check(circle.CircleGrid(1, 64, vals), 0.95, grid=(24, 96))
        worst = max(worst, rep["interior_max"] - rep["boundary_max"])
    yield _ok("circle", "max_principle", worst, 1e-9)


def _line(rng) -> Iterator[Check]:
    for eta in (0.5, 1.0, 2.0):
        yield _ok("line", f"abel_hat_mass_{eta:g}", abs(line.integrate(line.abel_hat_function(eta)) - 2 * math.pi), 1e-8)
    xi = np.linspace(-10, 10, 41)
    for a in (0.25, 1.0, math.pi, 4.0):
        err = np.max(np.abs(line.fourier_transform(line.gaussian(a), xi) - line.gaussian_hat(a, xi)))
        yield _ok("line", f"gaussian_hat_{a:.6g}", err, 1e-8)
    yield _ok("line", "plancherel_G1", line.plancherel_defect(line.gaussian(1.0)), 1e-7)
    tau = line.DEFAULT_QUAD.tau
    for name, f in (("G1", line.gaussian(1.0)), ("A1", line.abel(1.0))):
        for x in (-1.0, 1.0):
            p = line.abel_invert(f, x, 1e-3)
            q = line.abel_invert(f, x, 1e-3, route="frequency")
            yield _ok("line", f"invert_{name}_x{x:+g}", abs(p - complex(f(x))), 1e-3)
            yield _ok("line", f"invert_routes_{name}_x{x:+g}", abs(p - q), 2 * tau)
    phi = line.LineFunction(func=lambda s: s * np.exp(-s * s), envelope=Envelope(3.0, 2.0, 1.0))
    yield _ok("line", "sign_pv_odd", abs(line.sign_pv_transform(phi) - 2j * math.sqrt(math.pi)), 1e-6)
    yield _ok("line", "sign_pv_even", abs(line.sign_pv_transform(line.gaussian(1.0))), 1e-9)
    y = float(rng.uniform(-2, 2))
    s = float(rng.uniform(-3, 3))
    g = line.gaussian(1.0)
    yield _ok("line", "translation", abs(line.fourier_transform(g.translate(y), s) - line.gaussian_hat(1.0, s) * cmath.exp(-1j * s * y)), 1e-8)


def _sequences(rng) -> Iterator[Check]:
    worst = -math.inf
    for p, q, r in ((2.0, 2.0, 1.0), (3.0, 1.5, 1.0), (4.0, math.inf, 4.0)):
        for _ in range(50):
            a = sequences.IndexedFamily.from_vector(rng.standard_normal(8) + 1j * rng.standard_normal(8))
            b = sequences.IndexedFamily.from_vector(rng.standard_normal(8))
            rep = sequences.holder_check(a, b, p, q, r)
            worst = max(worst, (rep["lhs"] - rep["rhs"]) / max(1.0, rep["rhs"]))
    yield _ok("sequences", "holder", worst, 1e-10)
    worst = -math.inf
    for _ in range(50):
        a = sequences.IndexedFamily.from_vector(rng.standard_normal(6))
        b = sequences.IndexedFamily.from_vector(rng.standard_normal(6))
        lhs = sequences.lp_norm(a + b, 0.5) ** 0.5
        rhs = sequences.lp_norm(a, 0.5) ** 0.5 + sequences.lp_norm(b, 0.5) ** 0.5
        worst = max(worst, (lhs - rhs) / rhs)
    yield _ok("sequences", "quasi_triangle_p0.5", worst, 1e-12)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3)))
    U = sequences.OrthonormalSet(tuple(sequences.IndexedFamily.from_vector(Q[:, k]) for k in range(3)))
    v = sequences.IndexedFamily.from_vector(rng.standard_normal(6))
    yield _ok("sequences", "bessel_nonnegative", -sequences.bessel_defect(v, U), 1e-10)


def _measures(rng) -> Iterator[Check]:
    def rand_atoms(k):
        return tuple((tuple(np.exp(1j * rng.uniform(0, 2 * np.pi, 1))), complex(*rng.standard_normal(2))) for _ in range(k))

    mu = measures.MeasureT(1, rand_atoms(3), circle.TrigPoly.random(rng, 1, 3))
    nu = measures.MeasureT(1, rand_atoms(2))
    c = measures.convolve_measures(mu, nu)
    err = max(
        abs(measures.fourier_coefficient_measure(c, k)
            - measures.fourier_coefficient_measure(mu, k) * measures.fourier_coefficient_measure(nu, k))
        for k in range(-8, 9)
    )
    yield _ok("measures", "coefficient_product", err, 1e-12)
    d = measures.convolve_measures(measures.dirac_t(1.0), mu)
    same = d.atoms == mu.atoms and dict(d.density.coeffs) == dict(mu.density.coeffs)
    yield _ok("measures", "dirac_identity", 0.0 if same else 1.0, 0.0)
    yield _ok("measures", "norm_bound", max(abs(measures.fourier_coefficient_measure(mu, k)) for k in range(-8, 9))
              - measures.norm(mu), 1e-9)


def _almost_periodic(rng) -> Iterator[Check]:
    worst = -math.inf
    for _ in range(20):
        k = int(rng.integers(1, 6))
        freqs = rng.uniform(0.1, 10.0, size=k) * rng.choice([-1, 1], size=k)
        terms = [(float(x), complex(*rng.standard_normal(2))) for x in freqs] + [(0.0, complex(rng.standard_normal()))]
        f = ap.TrigSum(tuple(terms))
        L = float(rng.uniform(10, 1000))
        gap = abs(ap.invariant_mean(f, "averaged", L) - ap.invariant_mean(f))
        worst = max(worst, gap - ap.mean_error_bound(f, L))
    yield _ok("almost_periodic", "averaged_mean_bound", worst, 0.0)
    yield _ok("almost_periodic", "mean_of_exponential", abs(ap.invariant_mean(ap.TrigSum.exponential(2.0))), 0.0)


def _metric(rng) -> Iterator[Check]:
    viol = 0
    for _ in range(10):
        M = metric.FiniteMetricSpace.random(rng, 20)
        f = rng.standard_normal(20)
        j = float(rng.uniform(0.1, 5))
        fj = metric.lipschitz_regularize(f, M, j)
        viol += int(np.any(fj > f)) + int(np.any(fj < f.min())) + int(not metric.check_lipschitz(fj, M, j)[0])
    yield _ok("metric", "regularize_properties", viol, 0)
    viol = 0
    for _ in range(200):
        x, y, z = (metric.SymbolSequence.random(rng, int(rng.integers(1, 12))) for _ in range(3))
        dxz = metric.ultrametric_distance(x, z)
        viol += int(dxz > max(metric.ultrametric_distance(x, y), metric.ultrametric_distance(y, z)))
    yield _ok("metric", "strong_triangle", viol, 0)


def random_expr(rng, depth: int = 4) -> expr.Expr:
    """A random expression tree (used for the print/parse fixpoint check)."""
    if depth <= 0 or rng.random() < 0.25:
        return expr.Var() if rng.random() < 0.5 else expr.Num(float(np.round(rng.uniform(0, 10), 3)))
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return expr.Neg(random_expr(rng, depth - 1))
    if kind == 1:
        op = "+-*/"[int(rng.integers(0, 4))]
        return expr.BinOp(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == 2:
        return expr.Pow(random_expr(rng, depth - 1), int(rng.integers(-3, 4)))
    return expr.Call(expr.FUNCTIONS[int(rng.integers(0, 4))], random_expr(rng, depth - 1))


def _expr(rng) -> Iterator[Check]:
    bad = 0
    for _ in range(300):
        t = random_expr(rng)
        bad += int(expr.parse(expr.to_text(t)) != t)
    yield _ok("expr", "print_parse_fixpoint", bad, 0)
    crashes = 0
    for _ in range(2000):
        data = bytes(rng.integers(0, 256, size=int(rng.integers(0, 24))).tolist())
        try:
            expr.parse(data)
        except expr.ParseError:
            pass
        except Exception:  # noqa: BLE001 - counting crashes is the point
            crashes += 1
    yield _ok("expr", "fuzz_no_crash", crashes, 0)


GROUPS: dict[str, Callable] = {
    "series": _series,
    "circle": _circle,
    "line": _line,
    "sequences": _sequences,
    "measures": _measures,
    "almost_periodic": _almost_periodic,
    "metric": _metric,
    "expr": _expr,
}


def run_battery(seed: int = 0, groups=None) -> list[Check]:
    """Run the selected groups, each with its own generator derived from ``seed``."""
    out = []
    names = list(GROUPS) if groups is None else list(groups)
    order = list(GROUPS)
    for name in names:
        rng = np.random.default_rng([seed, order.index(name)])
        out.extend(GROUPS[name](rng))
    return out
