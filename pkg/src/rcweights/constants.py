"""Symbolic reversal constants: products of powers of named atoms.

A constant expression is kept permanently in canonical form -- a flattened
product of atom powers with exact rational exponents, sorted by atom, with
merged repeats and no unit factors.  Two flavours of atom exist:

* named atoms ("C1", "D") stand for assumed constants and can be evaluated
  once the caller supplies numbers >= 1 for them;
* existential atoms stand for the unnamed constants produced by
  self-improvement style rules ("there is some C2 > 0 ...").  They carry a
  human-readable constraint string but no machine semantics, and any
  expression containing one is flagged non-evaluable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exponents import as_fraction


class NotEvaluable(ValueError):
    """Evaluation was requested for an expression with existential atoms."""


@dataclass(frozen=True)
class Atom:
    """A single constant symbol; serial > 0 marks an existential atom."""

    label: str
    serial: int = 0
    constraint: str = ""

    @property
    def existential(self) -> bool:
        return self.serial > 0

    def _key(self):
        return (self.label, self.serial)

    def render(self) -> str:
        if self.existential:
            return f"{self.label}{self.serial}"
        return self.label


def _fmt_power(exp: Fraction) -> str:
    if exp == 1:
        return ""
    if exp.denominator == 1 and exp >= 0:
        return f"^{exp}"
    return f"^({exp})"


@dataclass(frozen=True)
class ConstExpr:
    """Canonical product of atom powers; the empty product is the unit."""

    factors: tuple = ()   # tuple[(Atom, Fraction), ...] sorted by atom key

    # -- construction ---------------------------------------------------

    @staticmethod
    def atom(label: str) -> "ConstExpr":
        return ConstExpr(((Atom(label), Fraction(1)),))

    @staticmethod
    def existential(allocator: "FreshNames", constraint: str = "") -> "ConstExpr":
        return ConstExpr(((allocator.fresh(constraint), Fraction(1)),))

    @staticmethod
    def product(parts: Iterable["ConstExpr"]) -> "ConstExpr":
        acc = ONE_CONST
        for p in parts:
            acc = acc * p
        return acc

    @staticmethod
    def _canonical(pairs) -> "ConstExpr":
        merged: dict = {}
        order: dict = {}
        for atom, exp in pairs:
            k = atom._key()
            merged[k] = merged.get(k, Fraction(0)) + exp
            order.setdefault(k, atom)
        factors = tuple(
            (order[k], merged[k])
            for k in sorted(merged)
            if merged[k] != 0
        )
        return ConstExpr(factors)

    def __mul__(self, other: "ConstExpr") -> "ConstExpr":
        return ConstExpr._canonical(self.factors + other.factors)

    def __pow__(self, theta) -> "ConstExpr":
        th = as_fraction(theta)
        return ConstExpr._canonical((a, e * th) for a, e in self.factors)

    # -- queries ----------------------------------------------------------

    @property
    def is_one(self) -> bool:
        return not self.factors

    @property
    def evaluable(self) -> bool:
        return all(not a.existential for a, _ in self.factors)

    def atoms(self) -> tuple:
        return tuple(a for a, _ in self.factors)

    def evaluate(self, env: Mapping[str, float]) -> float:
        if not self.evaluable:
            bad = [a.render() for a, _ in self.factors if a.existential]
            raise NotEvaluable(f"existential atoms present: {', '.join(bad)}")
        out = 1.0
        for atom, exp in self.factors:
            if atom.label not in env:
                raise KeyError(f"no value supplied for constant {atom.label!r}")
            out *= math.pow(env[atom.label], float(exp))
        return out

    def shape_key(self) -> tuple:
        """Equality key that forgets existential serial numbers.

        Used to compare constants 'by shape': two derivations that differ
        only in which fresh existential was minted compare equal.
        """
        parts = []
        for atom, exp in self.factors:
            if atom.existential:
                parts.append((("E", atom.label, atom.constraint), exp))
            else:
                parts.append((("N", atom.label), exp))
        return tuple(sorted(parts))

    def render(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{a.render()}{_fmt_power(e)}" for a, e in self.factors)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ConstExpr[{self.render()}]"


ONE_CONST = ConstExpr()


def scale_const(c: ConstExpr, theta) -> ConstExpr:
    """Constant transport under w -> w^theta: C goes to C^|theta|."""
    th = as_fraction(theta)
    if th == 0:
        raise ValueError("scaling a constant by zero is undefined")
    return c ** abs(th)


class FreshNames:
    """Deterministic allocator of existential atoms (E1, E2, ...)."""

    def __init__(self, label: str = "E", start: int = 1):
        self.label = label
        self._next = start

    def fresh(self, constraint: str = "") -> Atom:
        atom = Atom(self.label, self._next, constraint)
        self._next += 1
        return atom


# Allocator used when callers apply rules directly without a derivation
# context; serials stay unique across a process run.
DEFAULT_NAMES = FreshNames()
