import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from harmkit import sequences as S
from harmkit.errors import DimensionError, ExponentError, OrthonormalityError

cplx = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)
vectors = st.lists(cplx, min_size=1, max_size=10)
exponents = st.floats(0.2, 8.0)


def fam(v):
    return S.IndexedFamily.from_vector(v)


@given(vectors, vectors, st.sampled_from([(2.0, 2.0, 1.0), (3.0, 1.5, 1.0), (4.0, math.inf, 4.0), (1.0, 1.0, 0.5)]))
def test_holder(a, b, pqr):
    n = min(len(a), len(b))
    rep = S.holder_check(fam(a[:n]), fam(b[:n]), *pqr)
    assert rep["ok"]


def test_holder_exponent_relation():
    with pytest.raises(ExponentError):
        S.holder_check(fam([1]), fam([1]), 2.0, 2.0, 2.0)
    with pytest.raises(DimensionError):
        S.holder_check(fam([1]), S.IndexedFamily(2, {(0, 0): 1}), 2.0, 2.0, 1.0)


@given(vectors, exponents, st.floats(0.0, 10.0))
def test_norm_monotone(a, p, dq):
    assert S.lp_norm(fam(a), p + dq) <= S.lp_norm(fam(a), p) * (1 + 1e-12)


@given(vectors, vectors)
def test_quasi_triangle_half(a, b):
    n = min(len(a), len(b))
    x, y = fam(a[:n]), fam(b[:n])
    lhs = S.lp_norm(x + y, 0.5) ** 0.5
    assert lhs <= (S.lp_norm(x, 0.5) ** 0.5 + S.lp_norm(y, 0.5) ** 0.5) * (1 + 1e-12) + 1e-300


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0, math.inf])
def test_lp_norm_reference(p):
    v = np.array([3.0, -4.0, 1e-3j])
    ref = np.max(np.abs(v)) if p == math.inf else np.sum(np.abs(v) ** p) ** (1 / p)
    assert S.lp_norm(fam(v), p) == pytest.approx(ref, rel=1e-14)


def test_lp_norm_scaling_extremes():
    assert S.lp_norm(fam([1e300, 1e300]), 2.0) == pytest.approx(math.sqrt(2) * 1e300)
    assert S.lp_norm(fam([1e-300, 1e-300]), 2.0) == pytest.approx(math.sqrt(2) * 1e-300)
    with pytest.raises(ExponentError):
        S.lp_norm(fam([1.0]), 0.0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_bessel_and_projection(seed, k):
    rng = np.random.default_rng(seed)
    d = 7
    Q, _ = np.linalg.qr(rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k)))
    U = S.OrthonormalSet(tuple(fam(Q[:, c]) for c in range(k)))
    v = fam(rng.standard_normal(d) + 1j * rng.standard_normal(d))
    defect = S.bessel_defect(v, U)
    assert defect >= -1e-10
    resid = v - S.project(v, U)
    assert defect == pytest.approx(S.lp_norm(resid, 2) ** 2, abs=1e-10)
    for u in U:
        assert abs(S.inner_product(resid, u)) < 1e-10


def test_orthonormality_rejected():
    with pytest.raises(OrthonormalityError) as exc:
        S.OrthonormalSet((fam([1, 0]), fam([1, 1])))
    assert exc.value.entry == (0, 1)


@given(vectors, vectors)
def test_cauchy_schwarz(a, b):
    n = min(len(a), len(b))
    x, y = fam(a[:n]), fam(b[:n])
    assert abs(S.inner_product(x, y)) <= S.lp_norm(x, 2) * S.lp_norm(y, 2) * (1 + 1e-12) + 1e-300


@given(st.floats(0, 100), st.floats(0, 100), st.floats(1.01, 10))
def test_young(x, y, p):
    assume(x * y < 1e100)
    assert S.young_gap(x, y, p) >= -1e-9 * max(1.0, x * y)


def test_family_algebra_and_json():
    a = S.IndexedFamily(2, {(0, 1): 1.0, (2, -1): 2j})
    b = S.IndexedFamily.delta((0, 1)) * 3
    assert (a + b)[(0, 1)] == 4
    assert (a - a).support == frozenset()
    assert S.IndexedFamily.from_json(a.to_json()) == a
