"""Reverse-class facts, named-class tokens, and the mutable fact base.

A fact is an arrow: a weight expression, an exponent pair, a symbolic
reversal constant, and a strength.  Strong facts assert the two-sided
per-ball comparison between the lo-mean and the hi-mean; weak facts take
the lo-mean over the doubled ball (dilation fixed at 2; other dilations
are rejected at parse time).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .constants import ConstExpr, ONE_CONST
from .exponents import (
    Exp, ExponentPair, ExponentError, NEG_INF, ONE, POS_INF,
    ap_exponent, ap_index,
)
from .wexpr import WeightExpr, WeightSyntaxError, parse_weight

STRONG = "strong"
WEAK = "weak"
WEAK_DILATION = 2


@dataclass(frozen=True)
class Origin:
    """Provenance of a derived fact: rule tag, parent ids, replay params."""

    rule: str
    parents: tuple = ()
    note: str = ""
    params: tuple = ()      # tuple of (key, value) pairs, replayable

    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class RCFact:
    """An arrow: subject weight x exponent pair x constant x strength."""

    subject: WeightExpr
    pair: ExponentPair
    constant: ConstExpr = ONE_CONST
    strength: str = STRONG
    origin: Optional[Origin] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.strength not in (STRONG, WEAK):
            raise ValueError(f"bad strength {self.strength!r}")

    @property
    def weak(self) -> bool:
        return self.strength == WEAK

    def key(self) -> tuple:
        return (self.subject, self.pair, self.strength, self.constant)

    def with_origin(self, origin: Origin) -> "RCFact":
        return replace(self, origin=origin)

    def render(self) -> str:
        kind = "RCweak" if self.weak else "RC"
        name = name_class(self.pair) if not self.weak else None
        cls = name if name else f"{kind}{self.pair}"
        return f"{self.subject} in {cls} const {self.constant}"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class DoublingFact:
    """States that subject**exponent is a doubling weight."""

    subject: WeightExpr
    exponent: Exp
    constant: ConstExpr
    origin: Optional[Origin] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.exponent.is_finite or self.exponent.value == 0:
            raise ExponentError("doubling exponent must be finite and nonzero")

    def powered(self) -> WeightExpr:
        return self.subject ** self.exponent.value

    def render(self) -> str:
        return f"doubling {self.powered()} const {self.constant}"

    def __str__(self) -> str:
        return self.render()


# --------------------------------------------------------------------------
# Named classes
# --------------------------------------------------------------------------

_CLASS_RE = re.compile(r"^\s*(A|RH|RC|RCweak)\s*\(([^()]*)\)\s*$")


def parse_class_token(token: str) -> tuple:
    """Parse a class token into (pair, strength).

    Accepted forms: A(p) with p in [1, inf]; RH(s) with s in (1, inf];
    RC(r, s) and RCweak(r, s) with r < s; Harnack for the full axis.
    """
    if token.strip() == "Harnack":
        return ExponentPair(NEG_INF, POS_INF), STRONG
    m = _CLASS_RE.match(token)
    if not m:
        raise ExponentError(f"malformed class token {token!r}")
    kind, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    if kind == "A":
        if len(args) != 1:
            raise ExponentError(f"A(p) takes one index, got {token!r}")
        return ap_exponent(Exp.parse(args[0])), STRONG
    if kind == "RH":
        if len(args) != 1:
            raise ExponentError(f"RH(s) takes one index, got {token!r}")
        s = Exp.parse(args[0])
        if s <= ONE:
            raise ExponentError(f"RH(s) requires s > 1, got {s}")
        return ExponentPair(ONE, s), STRONG
    if len(args) != 2:
        raise ExponentError(f"{kind}(r,s) takes two endpoints, got {token!r}")
    pair = ExponentPair(Exp.parse(args[0]), Exp.parse(args[1]))
    return pair, (WEAK if kind == "RCweak" else STRONG)


def parse_class(token: str) -> ExponentPair:
    """Exponent pair named by a class token (strength discarded)."""
    return parse_class_token(token)[0]


def name_class(pair: ExponentPair) -> Optional[str]:
    """Conventional name of an exponent pair, if it has one."""
    if pair.lo.is_neg_inf and pair.hi.is_pos_inf:
        return "Harnack"
    if pair.hi == ONE and (pair.lo.is_neg_inf or pair.lo.value <= 0):
        return f"A({ap_index(pair.lo)})"
    if pair.lo == ONE:
        return f"RH({pair.hi})"
    return None


def class_token(pair: ExponentPair, strength: str = STRONG) -> str:
    """Render a pair back to a token, preferring named classes."""
    if strength == WEAK:
        return f"RCweak({pair.lo},{pair.hi})"
    return name_class(pair) or f"RC({pair.lo},{pair.hi})"


# --------------------------------------------------------------------------
# Fact base
# --------------------------------------------------------------------------

@dataclass
class Entry:
    fid: int
    fact: RCFact
    subsumed_by: Optional[int] = None


class FactBase:
    """Deduplicated, insertion-ordered store of facts.

    Two facts are duplicates when subject, pair, strength and canonical
    constant all agree.  A fact whose pair nests inside an existing strong
    fact with the same subject and constant is still stored but marked
    subsumed (shrinking makes it redundant); proof traces keep pointing at
    exact parents, so nothing is ever deleted.
    """

    def __init__(self) -> None:
        self.entries: list[Entry] = []
        self.doublings: list[DoublingFact] = []
        self.identities: list[tuple[WeightExpr, WeightExpr]] = []
        self._index: dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def facts(self) -> Iterable[RCFact]:
        return [e.fact for e in self.entries]

    def insert(self, fact: RCFact) -> tuple[int, bool]:
        """Insert a fact; returns (fact id, inserted?)."""
        key = fact.key()
        if key in self._index:
            return self._index[key], False
        fid = len(self.entries)
        entry = Entry(fid, fact)
        if fact.strength == STRONG:
            for old in self.entries:
                of = old.fact
                if of.strength != STRONG or of.subject != fact.subject:
                    continue
                if of.constant != fact.constant:
                    continue
                if of.pair != fact.pair and of.pair.contains(fact.pair):
                    entry.subsumed_by = old.fid
                elif of.pair != fact.pair and fact.pair.contains(of.pair):
                    if old.subsumed_by is None:
                        old.subsumed_by = fid
        self.entries.append(entry)
        self._index[key] = fid
        return fid, True

    def insert_doubling(self, fact: DoublingFact) -> None:
        if fact not in self.doublings:
            self.doublings.append(fact)

    def record_identity(self, lhs: WeightExpr, rhs: WeightExpr) -> None:
        self.identities.append((lhs, rhs))


# --------------------------------------------------------------------------
# Fact-file grammar (one statement per line, '#' comments):
#   weight <name>
#   assume <weight-expr> in <class-token> constant <atom-name>
#   doubling <weight-expr>^<r> constant <atom-name>
#   goal <weight-expr> in <class-token>
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Goal:
    subject: WeightExpr
    pair: ExponentPair
    strength: str = STRONG

    def render(self) -> str:
        return f"{self.subject} in {class_token(self.pair, self.strength)}"


@dataclass
class FactFile:
    weights: list
    base: FactBase
    goals: list


class FactFileError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_ATOM_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _split_in_clause(body: str, lineno: int):
    parts = re.split(r"\bin\b", body, maxsplit=1)
    if len(parts) != 2:
        raise FactFileError(lineno, "expected '<weight-expr> in <class-token>'")
    return parts[0].strip(), parts[1].strip()


def parse_fact_file(text: str) -> FactFile:
    """Parse the statement-per-line fact grammar; errors carry line numbers."""
    declared: list[str] = []
    base = FactBase()
    goals: list[Goal] = []

    def check_atoms(expr: WeightExpr, lineno: int) -> None:
        for name in expr.atoms():
            if name not in declared:
                raise FactFileError(lineno, f"undeclared weight {name!r}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(" ")
        body = body.strip()
        try:
            if head == "weight":
                if not _ATOM_NAME_RE.match(body):
                    raise FactFileError(lineno, f"bad weight name {body!r}")
                if body in declared:
                    raise FactFileError(lineno, f"weight {body!r} declared twice")
                declared.append(body)
            elif head == "assume":
                expr_text, rest = _split_in_clause(body, lineno)
                m = re.match(r"^(.*?)\s+constant\s+(\S+)\s*$", rest)
                if not m:
                    raise FactFileError(lineno, "expected 'constant <atom-name>'")
                token, cname = m.group(1).strip(), m.group(2)
                if not _ATOM_NAME_RE.match(cname):
                    raise FactFileError(lineno, f"bad constant name {cname!r}")
                subject = parse_weight(expr_text)
                check_atoms(subject, lineno)
                pair, strength = parse_class_token(token)
                base.insert(RCFact(subject, pair, ConstExpr.atom(cname), strength))
            elif head == "doubling":
                m = re.match(r"^(.*?)\s+constant\s+(\S+)\s*$", body)
                if not m:
                    raise FactFileError(lineno, "expected 'constant <atom-name>'")
                expr_text, cname = m.group(1).strip(), m.group(2)
                if not _ATOM_NAME_RE.match(cname):
                    raise FactFileError(lineno, f"bad constant name {cname!r}")
                powered = parse_weight(expr_text)
                check_atoms(powered, lineno)
                if len(powered.powers) != 1:
                    raise FactFileError(
                        lineno, "doubling statements take a single weight power")
                name, expo = powered.powers[0]
                base.insert_doubling(DoublingFact(
                    WeightExpr.atom(name), Exp.finite(expo), ConstExpr.atom(cname)))
            elif head == "goal":
                expr_text, token = _split_in_clause(body, lineno)
                subject = parse_weight(expr_text)
                check_atoms(subject, lineno)
                pair, strength = parse_class_token(token)
                goals.append(Goal(subject, pair, strength))
            else:
                raise FactFileError(lineno, f"unknown statement {head!r}")
        except FactFileError:
            raise
        except (ExponentError, WeightSyntaxError) as exc:
            raise FactFileError(lineno, str(exc)) from exc
    return FactFile(declared, base, goals)


def parse_goal(text: str) -> Goal:
    """Parse a standalone goal clause '<weight-expr> in <class-token>'."""
    parts = re.split(r"\bin\b", text, maxsplit=1)
    if len(parts) != 2:
        raise ExponentError("expected '<weight-expr> in <class-token>'")
    pair, strength = parse_class_token(parts[1].strip())
    return Goal(parse_weight(parts[0].strip()), pair, strength)
