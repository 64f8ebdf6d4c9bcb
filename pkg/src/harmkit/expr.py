"""A tiny expression language for real test functions of ``x``.

Grammar, lowest precedence first::

    sum   ::= prod (('+' | '-') prod)*
    prod  ::= unary (('*' | '/') unary)*
    unary ::= '-' unary | atom
    atom  ::= number | 'x' | func '(' sum ')' | '(' sum ')' | atom '^' ['-'] integer
    func  ::= 'exp' | 'sin' | 'cos' | 'abs'

Parentheses are transparent: there is no grouping node, so printing and
reparsing a tree gives the same tree.  Input is scanned as bytes and every
failure is a :class:`ParseError` carrying the byte offset and the set of
tokens that would have been accepted there.
"""
from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EnvelopeError, HarmkitError, PoleError
from .line import LineFunction
from .quadrature import DEFAULT_QUAD, Envelope, QuadSpec

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "parse",
    "to_text",
    "evaluate",
    "to_line_function",
    "FUNCTIONS",
    "MAX_DEPTH",
]

FUNCTIONS = ("exp", "sin", "cos", "abs")
MAX_DEPTH = 200
MAX_EXPONENT = 1024


class ParseError(HarmkitError, ValueError):
    """Syntax error at byte ``offset``; ``expected`` lists acceptable tokens."""

    def __init__(self, message: str, offset: int, expected=()):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset
        self.expected = tuple(sorted(expected))


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]

_NUMBER = re.compile(rb"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(rb"\d+")
_IDENT = re.compile(rb"[A-Za-z_][A-Za-z_0-9]*")
_SPACE = b" \t\r\n"


class _Parser:
    def __init__(self, data: bytes):
        self.s = data
        self.i = 0
        self.depth = 0

    def skip(self):
        while self.i < len(self.s) and self.s[self.i] in _SPACE:
            self.i += 1

    def peek(self) -> bytes:
        self.skip()
        return self.s[self.i : self.i + 1]

    def fail(self, message, expected):
        raise ParseError(message, self.i, expected)

    def expect(self, ch: bytes):
        if self.peek() != ch:
            got = self.peek()
            self.fail(f"expected {ch.decode()!r}, found {got!r}" if got else f"expected {ch.decode()!r} before end of input", {ch.decode()})
        self.i += 1

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(f"nesting deeper than {MAX_DEPTH}", ())

    def parse(self) -> Expr:
        tree = self.sum()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}", {"+", "-", "*", "/", "^", "end of input"})
        return tree

    def sum(self) -> Expr:
        self.enter()
        left = self.prod()
        while self.peek() in (b"+", b"-"):
            op = self.peek().decode()
            self.i += 1
            left = BinOp(op, left, self.prod())
        self.depth -= 1
        return left

    def prod(self) -> Expr:
        left = self.unary()
        while self.peek() in (b"*", b"/"):
            op = self.peek().decode()
            self.i += 1
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.peek() == b"-":
            self.i += 1
            self.enter()
            node = Neg(self.unary())
            self.depth -= 1
            return node
        return self.atom()

    def atom(self) -> Expr:
        node = self.primary()
        while self.peek() == b"^":
            self.i += 1
            self.skip()
            sign = 1
            if self.peek() == b"-":
                sign = -1
                self.i += 1
                self.skip()
            m = _INTEGER.match(self.s, self.i)
            num = _NUMBER.match(self.s, self.i)
            if not m or num.end() > m.end():
                self.fail("exponent must be an integer", {"integer"} | ({"-"} if sign == 1 else set()))
            k = int(m.group())
            if k > MAX_EXPONENT:
                self.fail(f"exponent larger than {MAX_EXPONENT}", {"integer"})
            self.i = m.end()
            node = Pow(node, sign * k)
        return node

    def primary(self) -> Expr:
        ch = self.peek()
        start = {"number", "x", "(", "-"} | set(FUNCTIONS)
        if not ch:
            self.fail("unexpected end of input", start)
        if ch == b"(":
            self.i += 1
            node = self.sum()
            self.expect(b")")
            return node
        m = _NUMBER.match(self.s, self.i)
        if m:
            v = float(m.group())
            if not math.isfinite(v):
                self.fail("number literal overflows", start)
            self.i = m.end()
            return Num(v)
        m = _IDENT.match(self.s, self.i)
        if m:
            name = m.group().decode()
            if name == "x":
                self.i = m.end()
                return Var()
            if name in FUNCTIONS:
                self.i = m.end()
                self.expect(b"(")
                arg = self.sum()
                self.expect(b")")
                return Call(name, arg)
            self.fail(f"unknown identifier {name!r} (known: x, {', '.join(FUNCTIONS)})", start)
        self.fail(f"unexpected {ch!r}", start)


def parse(text: str | bytes) -> Expr:
    """Parse an expression; raises :class:`ParseError` on any malformed input."""
    data = text.encode("utf-8", "surrogatepass") if isinstance(text, str) else bytes(text)
    # each nesting level costs about five frames; make room for MAX_DEPTH of them
    need = len(_frames()) + 6 * MAX_DEPTH + 100
    old = sys.getrecursionlimit()
    if need > old:
        sys.setrecursionlimit(need)
    try:
        return _Parser(data).parse()
    finally:
        if need > old:
            sys.setrecursionlimit(old)


def _frames() -> list:
    out, f = [], sys._getframe()
    while f is not None:
        out.append(f)
        f = f.f_back
    return out


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Num) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 0
    return 4


def _wrap(e: Expr, need: int) -> str:
    text = to_text(e)
    return text if _prec(e) >= need else f"({text})"


def to_text(e: Expr) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 4)}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


_UFUNC = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "abs": np.abs}


def evaluate(e: Expr, x):
    """Evaluate on a real scalar or array; division by an exact zero raises ``PoleError``."""
    xs = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(e, xs)
    out = np.broadcast_to(out, xs.shape).astype(np.float64)
    return float(out) if np.ndim(x) == 0 else out


def _eval(e: Expr, x: np.ndarray):
    if isinstance(e, Num):
        return np.float64(e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, BinOp):
        a, b = _eval(e.left, x), _eval(e.right, x)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        zero = np.asarray(b) == 0
        if np.any(zero):
            where = np.broadcast_to(x, np.broadcast(x, b).shape)[np.broadcast_to(zero, np.broadcast(x, b).shape)]
            raise PoleError(f"division by zero in {to_text(e)} at x = {float(where.ravel()[0]) if where.size else 'any'}")
        return a / b
    if isinstance(e, Pow):
        b = _eval(e.base, x)
        if e.exponent < 0:
            zero = np.asarray(b) == 0
            if np.any(zero):
                raise PoleError(f"negative power of zero in {to_text(e)}")
            return 1.0 / np.power(b, -e.exponent)
        return np.power(b, e.exponent)
    if isinstance(e, Call):
        return _UFUNC[e.func](_eval(e.arg, x))
    raise TypeError(f"not an expression node: {e!r}")


def _has_kink(e: Expr) -> bool:
    if isinstance(e, Call):
        return e.func == "abs" or _has_kink(e.arg)
    if isinstance(e, (Neg,)):
        return _has_kink(e.arg)
    if isinstance(e, Pow):
        return _has_kink(e.base)
    if isinstance(e, BinOp):
        return _has_kink(e.left) or _has_kink(e.right)
    return False


def to_line_function(e: Expr | str, envelope, q: QuadSpec = DEFAULT_QUAD, name: str | None = None) -> LineFunction:
    """Wrap an expression as a :class:`LineFunction` after checking its envelope.

    ``envelope`` is an :class:`Envelope` or a tuple ``(C, l[, decay])``.  The
    bound is spot-checked at 512 points of a logarithmic grid of ``|x|`` up to
    the quadrature cutoff (``1e6`` for non-integrable envelopes); a violation
    raises :class:`EnvelopeError` with the witness point.  Expressions using
    ``abs`` get a mesh break at ``0``.
    """
    text = e if isinstance(e, str) else None
    tree = parse(e) if isinstance(e, str) else e
    env = envelope if isinstance(envelope, Envelope) else Envelope(*map(float, envelope))
    R = q.cutoff(env) if env.integrable else 1e6
    kink = _has_kink(tree)
    f = LineFunction(
        func=lambda x: evaluate(tree, x),
        envelope=env,
        smoothness="piecewise" if kink else "continuous",
        breaks=(0.0,) if kink else (),
        name=name or text or to_text(tree),
    )
    try:
        f.spot_check(R, n=256)
    except PoleError as exc:
        raise EnvelopeError(f"{f.name} is singular on the sample grid: {exc}", witness=None) from exc
    return f
