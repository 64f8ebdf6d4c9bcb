import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from harmkit import expr as E
from harmkit import line
from harmkit.errors import EnvelopeError, PoleError
from harmkit.verify import random_expr


@pytest.mark.parametrize(
    "text,x,value",
    [
        ("1 + 2 * 3", 0.0, 7.0),
        ("(1 + 2) * 3", 0.0, 9.0),
        ("2 ^ 3 ^ 2", 0.0, 64.0),
        ("-x^2", 3.0, -9.0),
        ("x^-2", 2.0, 0.25),
        ("exp(-x^2) * cos(x)", 0.5, math.exp(-0.25) * math.cos(0.5)),
        ("abs(x - 1) / 4", -3.0, 1.0),
        ("1.5e2 - .5", 0.0, 149.5),
        ("10 - 4 - 3", 0.0, 3.0),
        ("8 / 4 / 2", 0.0, 1.0),
    ],
)
def test_evaluate(text, x, value):
    assert E.evaluate(E.parse(text), x) == pytest.approx(value)


@pytest.mark.parametrize(
    "text,offset",
    [("", 0), ("1 +", 3), ("(x", 2), ("foo(x)", 0), ("x ^ 1.5", 4), ("sin x", 4), ("x)", 1), ("1e999", 0)],
)
def test_parse_errors(text, offset):
    with pytest.raises(E.ParseError) as exc:
        E.parse(text)
    assert exc.value.offset == offset
    assert exc.value.expected


def test_depth_and_exponent_limits():
    with pytest.raises(E.ParseError):
        E.parse("(" * 500 + "x" + ")" * 500)
    with pytest.raises(E.ParseError):
        E.parse("-" * 500 + "x")
    with pytest.raises(E.ParseError):
        E.parse("x^100000")


def test_pole_errors():
    with pytest.raises(PoleError):
        E.evaluate(E.parse("1 / x"), np.array([1.0, 0.0]))
    with pytest.raises(PoleError):
        E.evaluate(E.parse("x^-1"), 0.0)


@given(st.integers(0, 2**32 - 1))
def test_print_parse_fixpoint(seed):
    t = random_expr(np.random.default_rng(seed), 5)
    assert E.parse(E.to_text(t)) == t


@given(st.binary(max_size=64))
def test_fuzz_bytes(data):
    try:
        E.parse(data)
    except E.ParseError:
        pass


@given(st.text(alphabet="x0123456789.+-*/^() eE", max_size=30))
def test_fuzz_grammar_alphabet(text):
    try:
        tree = E.parse(text)
    except E.ParseError:
        return
    assert E.parse(E.to_text(tree)) == tree


def test_to_line_function():
    # exp(-x^2) <= exp(1/4) exp(-|x|)
    f = E.to_line_function("exp(-x^2)", (1.3, 0.0, 1.0))
    assert line.fourier_transform(f, 1.0) == pytest.approx(line.gaussian_hat(1.0, 1.0), abs=1e-8)
    g = E.to_line_function("exp(-abs(x))", (1.0, 0.0, 1.0))
    assert g.breaks == (0.0,)


def test_envelope_rejected_with_witness():
    with pytest.raises(EnvelopeError) as exc:
        E.to_line_function("sin(x)", (1.0, 2.0))
    assert exc.value.witness is not None
    with pytest.raises(EnvelopeError):
        E.to_line_function("1 / x", (1.0, 2.0))
