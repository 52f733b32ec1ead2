"""Symbolic weight expressions: products of powers of named weights.

Like the constant layer, a weight expression is stored canonically as a
sorted product of atom powers with exact rational exponents.  The empty
product is the constant-one weight, which belongs to every reverse class
with unit constant and acts as the identity of the weight algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exponents import as_fraction


class WeightSyntaxError(ValueError):
    """Raised when a weight expression fails to parse."""


def _fmt_power(exp: Fraction) -> str:
    if exp == 1:
        return ""
    if exp.denominator == 1 and exp >= 0:
        return f"^{exp}"
    return f"^({exp})"


@dataclass(frozen=True)
class WeightExpr:
    """Canonical product of weight-atom powers."""

    powers: tuple = ()    # tuple[(name, Fraction), ...] sorted by name

    @staticmethod
    def atom(name: str) -> "WeightExpr":
        return WeightExpr(((name, Fraction(1)),))

    @staticmethod
    def _canonical(pairs) -> "WeightExpr":
        merged: dict = {}
        for name, exp in pairs:
            merged[name] = merged.get(name, Fraction(0)) + exp
        return WeightExpr(tuple(
            (n, merged[n]) for n in sorted(merged) if merged[n] != 0
        ))

    def __mul__(self, other: "WeightExpr") -> "WeightExpr":
        return WeightExpr._canonical(self.powers + other.powers)

    def __pow__(self, theta) -> "WeightExpr":
        th = as_fraction(theta)
        if th == 0:
            raise WeightSyntaxError("weight power with exponent zero")
        return WeightExpr._canonical((n, e * th) for n, e in self.powers)

    @property
    def is_one(self) -> bool:
        return not self.powers

    def atoms(self) -> tuple:
        return tuple(n for n, _ in self.powers)

    def power_ratio(self, target: "WeightExpr") -> Optional[Fraction]:
        """theta with self**theta == target, if one exists."""
        if self.is_one or target.is_one:
            return None
        if self.atoms() != target.atoms():
            return None
        theta = None
        for (_, a), (_, b) in zip(self.powers, target.powers):
            t = b / a
            if theta is None:
                theta = t
            elif theta != t:
                return None
        return theta

    def render(self) -> str:
        if not self.powers:
            return "1"
        return "*".join(f"{n}{_fmt_power(e)}" for n, e in self.powers)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"WeightExpr[{self.render()}]"


ONE_WEIGHT = WeightExpr()


# --------------------------------------------------------------------------
# Parser for the fact-file weight grammar:
#   expr   := term ('*' term)*
#   term   := factor ('^' exponent)?
#   factor := NAME | '(' expr ')'
#   exponent := RATIONAL | '(' RATIONAL ')'
# where RATIONAL is a signed integer, decimal, or p/q fraction.
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+/\d+|\d+\.\d+|\.\d+|\d+))"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[*^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise WeightSyntaxError(f"bad character {text[pos]!r} in weight expression")
        if m.lastgroup == "num":
            out.append(("num", m.group("num")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "")

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise WeightSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}")

    def expr(self) -> WeightExpr:
        out = self.term()
        while self.peek() == ("op", "*"):
            self.take()
            out = out * self.term()
        return out

    def term(self) -> WeightExpr:
        base = self.factor()
        if self.peek() == ("op", "^"):
            self.take()
            return base ** self.exponent()
        return base

    def factor(self) -> WeightExpr:
        kind, val = self.take()
        if kind == "name":
            return WeightExpr.atom(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise WeightSyntaxError(f"expected a weight name, found {val or 'end of input'!r}")

    def exponent(self) -> Fraction:
        kind, val = self.take()
        if (kind, val) == ("op", "("):
            kind, val = self.take()
            if kind != "num":
                raise WeightSyntaxError("expected a rational exponent inside parentheses")
            self.expect_op(")")
            return Fraction(val)
        if kind != "num":
            raise WeightSyntaxError(f"expected a rational exponent, found {val!r}")
        return Fraction(val)


def parse_weight(text: str) -> WeightExpr:
    """Parse a weight expression such as ``w``, ``w^(-1/2)`` or ``u*v^2``."""
    tokens = _tokenize(text)
    if not tokens:
        raise WeightSyntaxError("empty weight expression")
    if tokens == [("num", "1")]:
        return ONE_WEIGHT
    parser = _Parser(tokens)
    out = parser.expr()
    if parser.peek()[0] != "end":
        raise WeightSyntaxError(f"trailing input after weight expression: {parser.peek()[1]!r}")
    return out
