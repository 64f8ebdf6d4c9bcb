import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from harmkit import line as L
from harmkit.errors import DomainError, EnvelopeError, KernelNormalizationError, QuadratureError
from harmkit.quadrature import Envelope, QuadSpec


def odd_gaussian():
    return L.LineFunction(func=lambda s: s * np.exp(-s * s), envelope=Envelope(3.0, 2.0, 1.0))


@pytest.mark.parametrize("a", [0.25, 1.0, math.pi, 4.0])
def test_gaussian_transform(a):
    xi = np.linspace(-10, 10, 101)
    assert np.max(np.abs(L.fourier_transform(L.gaussian(a), xi) - L.gaussian_hat(a, xi))) < 1e-8


@pytest.mark.parametrize("eta", [0.5, 1.0, 2.0])
def test_abel_hat_mass(eta):
    assert abs(L.integrate(L.abel_hat_function(eta)) - 2 * math.pi) < 1e-8


@pytest.mark.parametrize("eta,xi", [(1.0, 0.0), (0.5, 3.0), (2.0, -7.5)])
def test_abel_transform_against_scipy(eta, xi):
    # independent oracle: the even part as a cosine integral
    ref, _ = integrate.quad(lambda x: 2 * math.exp(-eta * x), 0, np.inf, weight="cos", wvar=xi)
    # certified tail tau/2 plus an uncertified mesh error of the same order
    assert L.fourier_transform(L.abel(eta), xi) == pytest.approx(ref, abs=2e-9)
    assert L.abel_kernel_hat(eta, xi) == pytest.approx(ref, abs=1e-12)


@given(st.floats(-5, 5), st.floats(0.01, 5), st.floats(-40, 40))
def test_indicator_transform(a, width, xi):
    b = a + width
    got = L.fourier_transform(L.indicator(a, b), xi)
    # independent oracle: QUADPACK with cosine and sine weights
    re = integrate.quad(lambda x: 1.0, a, b, weight="cos", wvar=xi)[0]
    im = -integrate.quad(lambda x: 1.0, a, b, weight="sin", wvar=xi)[0]
    ref = complex(re, im)
    assert abs(got - ref) < 1e-8
    assert abs(L.indicator_hat(a, b, xi) - ref) < 1e-12


@given(st.floats(-3, 3), st.floats(-8, 8))
def test_translation_rule(y, xi):
    g = L.gaussian(1.0)
    got = L.fourier_transform(g.translate(y), xi)
    assert abs(got - L.gaussian_hat(1.0, xi) * cmath.exp(-1j * xi * y)) < 1e-8


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_transform_bounded_and_lipschitz(s, t):
    f = L.abel(1.0)
    fs, ft = L.fourier_transform(f, s), L.fourier_transform(f, t)
    assert abs(fs) <= L.l1_norm(f) + 1e-8
    assert abs(fs - ft) <= L.first_moment(f) * abs(s - t) + 2e-8


def test_riemann_lebesgue_indicator():
    xi = np.array([10.0, 100.0, 1000.0])
    v = np.abs(L.fourier_transform(L.indicator(-1, 1), xi))
    assert np.all(v <= 2 / xi + 1e-8)


def test_plancherel():
    assert L.plancherel_defect(L.gaussian(1.0)) < 1e-7
    for w in (0.5, 1.0, 2.0):
        assert L.plancherel_defect(L.bump(w)) < 1e-5
    assert L.plancherel_defect(L.mollified_abel(1.0)) < 1e-5


def test_polarized_plancherel():
    assert L.plancherel_polarized_defect(L.gaussian(1.0), L.gaussian(2.0).translate(0.5)) < 1e-6


@pytest.mark.parametrize("x", [-1.0, 1.0, 0.5])
@pytest.mark.parametrize("f", [L.gaussian(1.0), L.abel(1.0)], ids=["G1", "A1"])
def test_inversion_away_from_kink(f, x):
    p = L.abel_invert(f, x, 1e-3)
    q = L.abel_invert(f, x, 1e-3, route="frequency")
    assert abs(p - complex(f(x))) < 1e-3
    assert abs(p - q) < 2e-9


def test_inversion_error_shrinks_at_origin():
    f = L.abel(1.0)
    errs = [abs(L.abel_invert(f, 0.0, eta) - 1.0) for eta in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]


def test_inversion_gaussian_origin_rate():
    # P_eta * G_1 (0) - 1 = -eta * 2/sqrt(pi) + O(eta^2)
    eta = 1e-3
    err = abs(L.abel_invert(L.gaussian(1.0), 0.0, eta) - 1.0)
    assert err == pytest.approx(2 * eta / math.sqrt(math.pi), rel=1e-2)


def test_summability_routes():
    Phi = L.gaussian(1.0)
    f = L.gaussian(0.5)
    for x in (0.0, 0.7):
        s = L.summability_invert(f, Phi, 0.05, x)
        fr = L.summability_invert(f, Phi, 0.05, x, route="frequency")
        assert abs(s - fr) < 1e-8
        assert abs(s - complex(f(x))) < 1e-2


def test_summability_normalization():
    with pytest.raises(KernelNormalizationError):
        L.summability_invert(L.gaussian(1.0), L.gaussian(1.0).scaled(2.0), 0.1, 0.0)


@pytest.mark.parametrize("a,b,x", [(1.0, 1.0, 0.0), (1.0, 2.0, 1.0), (0.5, 3.0, -2.0)])
def test_gaussian_convolution(a, b, x):
    ref = math.sqrt(math.pi / (a + b)) * math.exp(-a * b * x * x / (a + b))
    assert L.convolve_line(L.gaussian(a), L.gaussian(b), x) == pytest.approx(ref, abs=1e-10)


def test_convolution_function_transform():
    # nested quadrature: every outer node is a full convolution integral
    q = QuadSpec(tau=1e-6)
    h = L.convolution_function(L.gaussian(1.0), L.abel(1.0), q)
    xi = np.array([0.0, 1.5, -4.0])
    expected = L.gaussian_hat(1.0, xi) * L.abel_kernel_hat(1.0, xi)
    assert np.max(np.abs(L.fourier_transform(h, xi, q) - expected)) < 1e-5


def test_convolution_needs_integrable():
    with pytest.raises(DomainError):
        L.convolve_line(L.sign(), L.exponential(1.0), 0.0)


def test_multiplication_formula():
    f, phi = L.gaussian(1.0), L.gaussian(2.0)
    lhs = L.generalized_transform(f, phi)
    rhs = integrate.quad(lambda s: math.sqrt(math.pi) * math.exp(-s * s / 4) * math.exp(-2 * s * s), -np.inf, np.inf)[0]
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_sign_pv():
    assert abs(L.sign_pv_transform(L.gaussian(1.0))) < 1e-9
    assert abs(L.sign_pv_transform(odd_gaussian()) - 2j * math.sqrt(math.pi)) < 1e-6
    cut = L.sign_pv_transform(odd_gaussian(), eps=1e-4)
    assert abs(cut - 2j * math.sqrt(math.pi)) < 1e-3


@pytest.mark.parametrize("eta", [1e-3, 1e-2, 0.1, 1.0])
def test_regularized_sign_offset(eta):
    # int 2i s / (eta^2 + s^2) * s exp(-s^2) ds = 2i (sqrt(pi) - pi eta erfcx(eta))
    expected = 2j * (math.sqrt(math.pi) - math.pi * eta * special.erfcx(eta))
    assert abs(L.sign_pv_regularized(odd_gaussian(), eta) - expected) < 1e-8


@pytest.mark.parametrize("l", [1, 2])
@pytest.mark.parametrize("xi", [0.0, 1.0, -2.5])
def test_derivative_exchange(l, xi):
    assert L.schwartz_relation_defect(L.gaussian(1.0), l, xi) < 1e-6


def test_step_approximation():
    f = L.gaussian(1.0)
    eps = 1e-3
    s = L.step_approximate(f, eps)
    xi = np.linspace(-20, 20, 41)
    assert np.max(np.abs(s.hat(xi) - L.gaussian_hat(1.0, xi))) < eps
    back = L.StepFunction.from_json(s.to_json())
    assert back == s


def test_step_function_eval():
    s = L.StepFunction((0.0, 1.0, 3.0), (2.0, -1.0))
    np.testing.assert_array_equal(s(np.array([-1.0, 0.0, 0.5, 1.0, 2.9, 3.0])), [0, 2, 2, -1, -1, 0])
    with pytest.raises(ValueError):
        L.StepFunction((1.0, 0.0), (1.0,))


def test_envelope_violation_reported():
    bad = L.LineFunction(func=lambda x: np.exp(-0.5 * np.abs(x)), envelope=Envelope(1.0, 0.0, 1.0))
    with pytest.raises(EnvelopeError) as exc:
        L.integrate(bad)
    assert exc.value.witness is not None


def test_explicit_cutoff_too_small():
    with pytest.raises(QuadratureError):
        L.integrate(L.abel(1.0), QuadSpec(R=5.0))


@pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
def test_poisson_kernel_line_mass(t):
    # the kernel decays like 1/y^2: a tight tau needs R ~ 1/tau, fine without oscillation
    assert L.integrate(L.poisson(t), QuadSpec(tau=1e-7)) == pytest.approx(1.0, abs=2e-7)


def test_poisson_sup_outside():
    t, d = 0.1, 0.5
    y = np.linspace(d, 50, 2000)
    assert np.max(L.poisson_kernel_line(t, y)) <= L.poisson_sup_outside(t, d) + 1e-15
