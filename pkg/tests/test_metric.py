from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from harmkit import metric as M
from harmkit.errors import DomainError, ExponentError

seeds = st.integers(0, 2**32 - 1)
words = st.lists(st.integers(0, 1), min_size=1, max_size=20).map(tuple)


def space(seed, n=20):
    rng = np.random.default_rng(seed)
    return M.FiniteMetricSpace.random(rng, n), rng.standard_normal(n), rng


@given(seeds, st.floats(0.05, 10))
def test_regularization_properties(seed, j):
    X, f, _ = space(seed)
    fj = M.lipschitz_regularize(f, X, j)
    assert np.all(fj <= f)
    assert np.all(fj >= f.min())
    assert M.check_lipschitz(fj, X, j)[0]


@given(seeds, st.floats(0.05, 5), st.floats(0.0, 5))
def test_regularization_monotone_in_j(seed, j, dj):
    X, f, _ = space(seed, 12)
    assert np.all(M.lipschitz_regularize(f, X, j) <= M.lipschitz_regularize(f, X, j + dj) + 1e-12)


@given(seeds)
def test_finite_threshold(seed):
    X, f, rng = space(seed)
    x = int(rng.integers(0, 20))
    jx = M.regularization_threshold(f, X, x)
    assert M.lipschitz_regularize(f, X, jx + 1e-9)[x] == f[x]
    if jx > 0.01:
        assert M.lipschitz_regularize(f, X, 0.5 * jx)[x] < f[x]


def test_two_point_example():
    X = M.FiniteMetricSpace((0, 1), np.array([[0.0, 1.0], [1.0, 0.0]]))
    f = np.array([0.0, 3.0])
    np.testing.assert_allclose(M.lipschitz_regularize(f, X, 1.0), [0.0, 1.0])
    np.testing.assert_allclose(M.lipschitz_regularize(f, X, 3.0), [0.0, 3.0])
    ok, pair = M.check_lipschitz(f, X, 1.0)
    assert not ok and set(pair) == {0, 1}


def test_metric_validation():
    with pytest.raises(ValueError):
        M.FiniteMetricSpace((0, 1, 2), np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float))
    with pytest.raises(ValueError):
        M.FiniteMetricSpace((0, 1), np.array([[0, 1], [2, 0]], dtype=float))


def test_metric_json():
    X, f, _ = space(0, 5)
    doc = X.to_json(f)
    Y = M.FiniteMetricSpace.from_json(doc)
    assert np.array_equal(X.dist, Y.dist) and doc["values"] == list(f)


@given(st.floats(0, 1e6), st.floats(0, 1e6), st.floats(0.01, 1))
def test_snowflake(r, t, a):
    assert M.snowflake_check(r, t, a)


def test_snowflake_domain():
    with pytest.raises(ExponentError):
        M.snowflake_check(1, 1, 1.5)


@given(words, words, words, st.floats(0.05, 1))
def test_strong_triangle(x, y, z, rho):
    X, Y, Z = (M.SymbolSequence(w) for w in (x, y, z))
    d = M.ultrametric_distance
    assert d(X, Z, rho) <= max(d(X, Y, rho), d(Y, Z, rho))


@given(words, words, st.floats(0.05, 0.95), st.floats(0.1, 3))
def test_power_identity(x, y, rho, a):
    X, Y = M.SymbolSequence(x), M.SymbolSequence(y)
    assert M.ultrametric_distance(X, Y, rho**a) == pytest.approx(M.ultrametric_distance(X, Y, rho) ** a, rel=1e-12)


def test_padding_convention():
    assert M.SymbolSequence((1, 0)) == M.SymbolSequence((1, 0, 0, 0))
    assert hash(M.SymbolSequence((1,))) == hash(M.SymbolSequence((1, 0)))
    assert M.ultrametric_distance(M.SymbolSequence((1,)), M.SymbolSequence((1, 0, 0))) == 0.0
    assert M.ultrametric_distance(M.SymbolSequence((1, 0)), M.SymbolSequence((1, 1))) == 0.5


@given(words, words, st.integers(0, 20))
def test_balls_are_prefix_determined(x, c, l):
    X, C = M.SymbolSequence(x), M.SymbolSequence(c)
    n = max(len(x), len(c), l)
    px = (x + (0,) * n)[:l]
    pc = (c + (0,) * n)[:l]
    assert M.in_ball(X, C, l) == (px == pc)


def test_binary_maps_exact():
    x = M.SymbolSequence((1, 0, 1))
    assert M.binary_to_unit(x, exact=True) == Fraction(5, 8)
    assert M.binary_to_cantor(x, exact=True) == Fraction(2, 3) + Fraction(2, 27)
    ones = M.SymbolSequence((1,) * 20)
    assert M.binary_to_unit(ones) == pytest.approx(1 - 2**-20)
    with pytest.raises(DomainError):
        M.binary_to_unit(M.SymbolSequence((2,)))


@pytest.mark.parametrize("length", [6, 10, 16])
def test_cantor_bilipschitz(length):
    rep = M.cantor_bilipschitz_check(length, pairs=50_000)
    assert rep["ok"] and rep["forward"] <= 2 and rep["inverse"] <= 3 + 1e-9


def test_prefix_net():
    net = M.prefix_net((0, 1), 3)
    assert len(net) == 8
    x = M.SymbolSequence((1, 1, 0, 1, 1))
    assert min(M.ultrametric_distance(x, c) for c in net) <= 0.5**3
