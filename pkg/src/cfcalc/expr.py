"""Right-hand sides ``phi(t, x)`` written as small arithmetic expressions.

Grammar (lowest to highest binding)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 't' | 'x' | FUNC '(' expr ')' | '(' expr ')'

so ``^`` is right associative and binds tighter than unary minus
(``-2^2 == -4``). Evaluation works on floats and on numpy arrays alike.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalDomainError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Number",
    "Var",
    "Neg",
    "Bin",
    "Call",
    "Expr",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "to_string",
    "as_function",
    "estimate_lipschitz",
]

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs")
VARIABLES = ("t", "x")


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Bin:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call:
    fn: str
    arg: Expr


Expr = Union[Number, Var, Neg, Bin, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(text)
    while pos < end:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            # point at the offending character, not the whitespace before it
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def accept(self, *ops):
        kind, val, _ = self.tok
        if kind == "op" and val in ops:
            self.i += 1
            return val
        return None

    def expect(self, op):
        if self.accept(op) is None:
            kind, val, off = self.tok
            got = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {op!r}, got {got}", off)

    def parse(self) -> Expr:
        node = self.expr()
        kind, val, off = self.tok
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while (op := self.accept("*", "/")) is not None:
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-") is not None:
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.accept("^") is not None:
            return Bin("^", base, self.unary())
        return base

    def primary(self):
        kind, val, off = self.tok
        if kind == "num":
            self.i += 1
            return Number(float(val))
        if kind == "name":
            self.i += 1
            if val in VARIABLES:
                return Var(val)
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise UnknownIdentifier(f"unknown identifier {val!r}", off)
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        got = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"expected a number, variable or '(' but got {got}", off)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    >>> parse("sin(t) - x^2")
    Bin(op='-', left=Call(fn='sin', arg=Var(name='t')), right=Bin(op='^', left=Var(name='x'), right=Number(value=2.0)))
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ExprSyntaxError("non-ASCII character", len(text[:bad].encode()))
    return _Parser(text).parse()


def to_string(e: Expr) -> str:
    """Fully parenthesised source text that parses back to ``e``."""
    if isinstance(e, Number):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_string(e.operand)})"
    if isinstance(e, Bin):
        return f"({to_string(e.left)} {e.op} {to_string(e.right)})"
    return f"{e.fn}({to_string(e.arg)})"


_UFUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def _check(value, e):
    if not np.all(np.isfinite(value)):
        raise EvalDomainError("non-finite result", to_string(e))
    return value


def _eval(e: Expr, t, x):
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Var):
        return t if e.name == "t" else x
    if isinstance(e, Neg):
        return -_eval(e.operand, t, x)
    if isinstance(e, Call):
        arg = _eval(e.arg, t, x)
        if e.fn == "ln" and np.any(np.asarray(arg) <= 0.0):
            raise EvalDomainError("logarithm of a non-positive number", to_string(e))
        if e.fn == "sqrt" and np.any(np.asarray(arg) < 0.0):
            raise EvalDomainError("square root of a negative number", to_string(e))
        return _check(_UFUNCS[e.fn](arg), e)
    left = _eval(e.left, t, x)
    right = _eval(e.right, t, x)
    if e.op == "+":
        return _check(np.add(left, right), e)
    if e.op == "-":
        return _check(np.subtract(left, right), e)
    if e.op == "*":
        return _check(np.multiply(left, right), e)
    if e.op == "/":
        if np.any(np.asarray(right) == 0.0):
            raise EvalDomainError("division by zero", to_string(e))
        return _check(np.divide(left, right), e)
    return _check(np.power(np.asarray(left, dtype=float), right), e)


def evaluate(e: Expr, t, x):
    """Evaluate ``e`` at ``(t, x)``; scalars give a float, arrays broadcast.

    Raises :class:`~cfcalc.errors.EvalDomainError` naming the first node that
    divides by zero, leaves the domain of ``ln``/``sqrt`` or overflows.
    """
    with np.errstate(all="ignore"):
        out = _eval(e, t, x)
    if np.ndim(out) == 0 and np.ndim(t) == 0 and np.ndim(x) == 0:
        return float(out)
    return np.broadcast_to(out, np.broadcast(np.asarray(t), np.asarray(x)).shape).astype(float)


def as_function(e: Expr):
    """Wrap ``e`` as a vectorised ``phi(t, x)`` callable."""

    def phi(t, x):
        return evaluate(e, t, x)

    phi.__doc__ = to_string(e)
    return phi


def estimate_lipschitz(
    e: Expr,
    t_range: tuple[float, float],
    x_range: tuple[float, float],
    samples: int = 64,
    safety: float = 1.1,
) -> float:
    """Upper estimate of ``sup |d phi / dx|`` over a rectangle.

    Central differences with step ``1e-6 * (x_hi - x_lo)`` on a
    ``samples x samples`` lattice, multiplied by ``safety``.
    """
    if samples < 4:
        raise ValueError("samples must be >= 4")
    (t0, t1), (x0, x1) = t_range, x_range
    if not (t1 > t0 and x1 > x0):
        raise ValueError("t_range and x_range must be nondegenerate")
    h = 1e-6 * (x1 - x0)
    tt, xx = np.meshgrid(np.linspace(t0, t1, samples), np.linspace(x0, x1, samples))
    xp, xm = xx + h, xx - h
    # divide by the representable step, not the nominal 2h
    slope = (evaluate(e, tt, xp) - evaluate(e, tt, xm)) / (xp - xm)
    return safety * float(np.max(np.abs(slope)))
