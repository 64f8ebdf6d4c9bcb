import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from harmkit.errors import EnvelopeError, QuadratureError
from harmkit.quadrature import DEFAULT_QUAD, Envelope, QuadSpec, simpson_rule

# keep away from the borderline l -> 1, decay -> 0 where no finite cutoff exists
envelopes = st.builds(Envelope, st.floats(0.1, 10), st.floats(0, 4), st.floats(0, 3)).filter(
    lambda e: e.l >= 1.5 or e.decay >= 0.05
)


@given(envelopes, st.floats(0.5, 50))
def test_tail_bounds_true_tail(env, R):
    true = 2 * integrate.quad(lambda x: float(env(x)), R, np.inf, limit=200, epsabs=0, epsrel=1e-11)[0]
    assert env.tail(R) >= true * (1 - 1e-7)


@given(envelopes)
def test_l1_bound(env):
    true = 2 * integrate.quad(lambda x: float(env(x)), 0, np.inf, limit=200, epsabs=0, epsrel=1e-11)[0]
    assert env.l1_bound() >= true * (1 - 1e-7)


@given(envelopes.filter(lambda e: e.l >= 3 or e.decay >= 0.05), st.sampled_from([1e-3, 1e-6, 1e-9]))
def test_cutoff_meets_budget(env, budget):
    R = env.cutoff(budget)
    assert env.tail(R) <= budget


def test_non_integrable_envelope():
    with pytest.raises(QuadratureError):
        Envelope(1.0, 1.0).cutoff(1e-6)
    with pytest.raises(ValueError):
        Envelope(-1.0, 1.0)


def test_check_reports_witness():
    env = Envelope(1.0, 0.0, 1.0)
    x = np.array([0.0, 1.0, 2.0])
    env.check(x, np.exp(-x))
    with pytest.raises(EnvelopeError) as exc:
        env.check(x, np.array([1.0, 1.0, 0.0]))
    assert exc.value.witness == 1.0
    with pytest.raises(EnvelopeError):
        env.check(x, np.array([0.0, np.nan, 0.0]))


@pytest.mark.parametrize(
    "fn,a,b,exact",
    [
        (np.exp, 0.0, 1.0, math.e - 1),
        (np.cos, -3.0, 3.0, 2 * math.sin(3.0)),
        (lambda x: np.abs(x) ** 3, -1.0, 2.0, 0.25 + 4.0),
    ],
)
def test_simpson_accuracy(fn, a, b, exact):
    # h = 1/32 leaves about h^4 / 2880 * max|f''''| per unit length
    x, w = simpson_rule(a, b, DEFAULT_QUAD, breaks=(0.0,))
    assert np.dot(w, fn(x)) == pytest.approx(exact, abs=2e-9)


def test_simpson_integrates_cubics_exactly():
    x, w = simpson_rule(-2.0, 5.0, QuadSpec(h=0.5))
    assert np.dot(w, x**3 - x) == pytest.approx((5**4 - 16) / 4 - (25 - 4) / 2, rel=1e-13)


def test_breaks_are_nodes():
    x, _ = simpson_rule(0.0, 1.0, DEFAULT_QUAD, breaks=(0.3, 0.7))
    assert 0.3 in x and 0.7 in x


def test_oscillation_cap_tightens_with_tau():
    loose = simpson_rule(0.0, 10.0, QuadSpec(tau=1e-3), omega=5.0)[0].size
    tight = simpson_rule(0.0, 10.0, QuadSpec(tau=1e-12), omega=5.0)[0].size
    assert tight > loose


def test_panel_budget():
    with pytest.raises(QuadratureError):
        simpson_rule(0.0, 1e6, QuadSpec(max_panels=100), omega=100.0)


def test_explicit_cutoff_validated():
    env = Envelope(1.0, 2.0)
    with pytest.raises(QuadratureError):
        QuadSpec(R=10.0).cutoff(env)
    assert QuadSpec(R=1e12, tau=1e-3).cutoff(env) == 1e12
