"""Goal-directed derivation search over the rule calculus.

``derive`` runs a bounded breadth-first saturation of the fact base under
the rules, looking for the shallowest derivation of a goal arrow.  Because
scaling ranges over a continuum of powers, the search draws its candidate
powers from a finite, goal-directed generator: solutions of the endpoint
transport equations, the class-defining values of named arrows in the base
(1-p and its conjugate for an A-class, s and 1/s for a reverse Holder
class), the subject-exponent ratio toward the goal, -1, and any values the
caller supplies.  The generator is deliberately user-extendable; search
completeness is out of reach and not claimed.

Ties between derivations of equal depth are broken by preferring an
evaluable constant over an existential one, then the lexicographically
smallest rule-tag sequence.  Results are deterministic for a fixed base,
goal and options.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .constants import FreshNames
from .exponents import (
    Exp, ExponentPair, ONE, ZERO, as_fraction, scale_pair,
)
from .facts import DoublingFact, FactBase, Goal, RCFact, STRONG
from .rules import (
    AINF_TO_AR, AP_LEFT, CONCAT, CROSS_ZERO, CROSS_ZERO_VARIANT, FACTOR_IF,
    INTERPOLATE, RH_RIGHT, RH_TO_AQ, RuleError, SCALE, SELF_IMPROVE_AINF,
    SELF_IMPROVE_LEFT, SELF_IMPROVE_RH, SELF_IMPROVE_RHS_TO_AQ, SHRINK,
    SPLIT, VARIANT_TAGS, WEAK_EXTEND, WEAK_PROMOTE, WEAK_RH_RIGHT,
    apply_concat, apply_factor_if, apply_interpolate, apply_scale,
    apply_self_improve, apply_shrink, apply_split, apply_weak_extend,
    apply_weak_promote,
)
from .wexpr import ONE_WEIGHT, WeightExpr

# Rules the breadth-first search applies.  The nonconstructive splitting
# rules mint fresh weight atoms that cannot occur in a goal, so they are
# available only through direct application.
SEARCH_RULES = (
    CONCAT, CROSS_ZERO, FACTOR_IF, INTERPOLATE, SCALE,
    SELF_IMPROVE_AINF, SELF_IMPROVE_LEFT, SELF_IMPROVE_RH,
    SELF_IMPROVE_RHS_TO_AQ, SHRINK, WEAK_EXTEND, WEAK_PROMOTE,
)

AnyFact = Union[RCFact, DoublingFact]


def default_witnesses() -> dict:
    """Default witness values for the qualitative (existential) rules."""
    return {
        RH_RIGHT: (Fraction(1),),
        AP_LEFT: (),                      # per-fact default (p-1)/2
        RH_TO_AQ: (Fraction(2),),
        AINF_TO_AR: (Fraction(2), Fraction(3)),
        WEAK_RH_RIGHT: (Fraction(1),),
        CROSS_ZERO_VARIANT: (),           # goal-directed, else 1
    }


# --------------------------------------------------------------------------
# Shared rule executor: used by the search, by trace normalization and by
# replay, so a trace re-executes through exactly one code path.
# --------------------------------------------------------------------------

def execute_rule(tag: str, parents: list, params: dict,
                 names: Optional[FreshNames] = None) -> RCFact:
    if tag == SHRINK:
        return apply_shrink(parents[0], params["target"])
    if tag == SPLIT:
        left, right = apply_split(parents[0], params["cut"])
        return left if params["side"] == "lo" else right
    if tag == CONCAT:
        return apply_concat(parents[0], parents[1])
    if tag == SCALE:
        return apply_scale(parents[0], params["theta"])
    if tag == WEAK_PROMOTE:
        return apply_weak_promote(parents[0], parents[1])
    if tag == WEAK_EXTEND:
        return apply_weak_extend(parents[0], params["p"], names)
    if tag == INTERPOLATE:
        return apply_interpolate(parents[0], parents[1], params["theta"])
    if tag == FACTOR_IF:
        return apply_factor_if(parents[0], parents[1])
    if tag in (SELF_IMPROVE_RH, SELF_IMPROVE_LEFT, SELF_IMPROVE_RHS_TO_AQ,
               SELF_IMPROVE_AINF, CROSS_ZERO):
        return apply_self_improve(parents[0], params["variant"],
                                  params["witness"], names)
    raise RuleError(f"rule {tag!r} cannot be executed from a trace")


# --------------------------------------------------------------------------
# Derivations
# --------------------------------------------------------------------------

@dataclass
class TraceNode:
    index: int
    rule: Optional[str]          # None for assumed leaves
    parents: tuple
    fact: AnyFact
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def is_leaf(self) -> bool:
        return self.rule is None


@dataclass
class Derivation:
    """A replayable proof trace: leaves first, topologically ordered."""

    nodes: list
    goal: Goal

    @property
    def goal_fact(self) -> RCFact:
        return self.nodes[-1].fact

    def steps(self) -> list:
        return [n for n in self.nodes if not n.is_leaf]

    @property
    def step_count(self) -> int:
        return len(self.steps())

    @property
    def depth(self) -> int:
        depths = {}
        for n in self.nodes:
            if n.is_leaf:
                depths[n.index] = 0
            else:
                depths[n.index] = 1 + max(depths[p] for p in n.parents)
        return max(depths.values()) if depths else 0

    def tag_sequence(self) -> tuple:
        return tuple(n.rule for n in self.steps())

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            kind = "rule"
            if n.is_leaf:
                kind = "doubling" if isinstance(n.fact, DoublingFact) else "assume"
            nodes.append({
                "id": n.index,
                "kind": kind,
                "rule": n.rule,
                "parents": list(n.parents),
                "fact": n.fact.render(),
                "note": n.note,
            })
        return {
            "schema": "rcweights.derivation/1",
            "goal": self.goal.render(),
            "derived": self.goal_fact.render(),
            "depth": self.depth,
            "steps": self.step_count,
            "nodes": nodes,
        }

    def render_text(self) -> str:
        lines = [f"goal: {self.goal.render()}"]
        for n in self.nodes:
            if n.is_leaf:
                kind = "doubling" if isinstance(n.fact, DoublingFact) else "assume"
                lines.append(f"  [{n.index}] {kind:<22} {n.fact.render()}")
            else:
                parents = ",".join(str(p) for p in n.parents)
                note = f"  ({n.note})" if n.note else ""
                lines.append(
                    f"  [{n.index}] {n.rule:<14} <- {parents:<6} {n.fact.render()}{note}")
        lines.append(f"depth {self.depth}, {self.step_count} steps")
        return "\n".join(lines)


def replay(derivation: Derivation) -> RCFact:
    """Re-execute a derivation from its leaves; returns the rebuilt goal fact.

    The rebuilt facts must equal the stored ones bit-exactly; existential
    serials are reproduced because traces are normalized to allocate them
    in step order.
    """
    names = FreshNames()
    rebuilt: dict[int, AnyFact] = {}
    for node in derivation.nodes:
        if node.is_leaf:
            rebuilt[node.index] = node.fact
        else:
            parents = [rebuilt[p] for p in node.parents]
            fact = execute_rule(node.rule, parents, node.params, names)
            if fact != node.fact:
                raise RuleError(
                    f"replay mismatch at node {node.index}: {fact} != {node.fact}")
            rebuilt[node.index] = fact
    return rebuilt[max(rebuilt)]


# --------------------------------------------------------------------------
# Candidate generation
# --------------------------------------------------------------------------

def _class_thetas(pair: ExponentPair) -> set:
    out = set()
    lo, hi = pair.lo, pair.hi
    if hi == ONE and lo.is_finite and lo.value < 0:
        one_minus_p = 1 / lo.value          # lo = 1/(1-p)
        out.update({one_minus_p, 1 / one_minus_p})
    if lo == ONE and hi.is_finite:
        out.update({hi.value, 1 / hi.value})
    return out


def theta_pool(base_facts: Iterable[RCFact], goal: Optional[Goal],
               extra: Iterable) -> tuple:
    pool = {Fraction(-1)}
    for f in base_facts:
        pool |= _class_thetas(f.pair)
    if goal is not None:
        pool |= _class_thetas(goal.pair)
    for t in extra:
        pool.add(as_fraction(t))
    pool.discard(Fraction(0))
    pool.discard(Fraction(1))
    return tuple(sorted(pool))


def _fact_thetas(fact: RCFact, goal: Optional[Goal], pool: tuple) -> list:
    cands = set(pool)
    if goal is not None:
        ratio = fact.subject.power_ratio(goal.subject)
        if ratio is not None:
            cands.add(ratio)
        for fe in (fact.pair.lo, fact.pair.hi):
            for ge in (goal.pair.lo, goal.pair.hi):
                if fe.is_finite and ge.is_finite and fe.value and ge.value:
                    cands.add(fe.value / ge.value)
    cands.discard(Fraction(0))
    cands.discard(Fraction(1))
    if fact.weak:
        cands = {t for t in cands if t > 0}
    return sorted(cands)


def _shrink_targets(fact: RCFact, goal: Optional[Goal], pool: tuple) -> list:
    if fact.weak:
        return []
    lo, hi = fact.pair.lo, fact.pair.hi
    raw = []
    if lo < ONE <= hi:
        raw.append(ExponentPair(lo, ONE))       # A-class shape
    if lo <= ZERO and ONE <= hi:
        raw.append(ExponentPair(ZERO, ONE))     # limiting A-class shape
    if lo <= ONE < hi:
        raw.append(ExponentPair(ONE, hi))       # reverse Holder shape
    if goal is not None:
        raw.append(goal.pair)
        for t in pool:
            raw.append(scale_pair(goal.pair, 1 / t))
    out, seen = [], set()
    for target in raw:
        if target == fact.pair or target in seen:
            continue
        seen.add(target)
        if fact.pair.contains(target):
            out.append(target)
    return out


def _variant_applications(fact: RCFact, witnesses: dict,
                          goal: Optional[Goal]) -> list:
    """(variant, witness) pairs whose shape precondition this fact meets."""
    lo, hi = fact.pair.lo, fact.pair.hi
    out = []
    if not fact.weak:
        if hi == ONE and lo < ZERO:
            for w in witnesses[RH_RIGHT]:
                out.append((RH_RIGHT, w))
        if hi == ONE and lo.is_finite and lo.value < 0:
            eps_list = witnesses[AP_LEFT]
            if not eps_list:
                p = 1 - 1 / lo.value
                eps_list = ((p - 1) / 2,)
            for w in eps_list:
                out.append((AP_LEFT, w))
        if lo == ONE and hi.is_finite:
            for w in witnesses[RH_TO_AQ]:
                out.append((RH_TO_AQ, w))
        if fact.pair == ExponentPair(ZERO, ONE):
            for w in witnesses[AINF_TO_AR]:
                out.append((AINF_TO_AR, w))
        if hi < ZERO or lo > ZERO:
            eps_list = list(witnesses[CROSS_ZERO_VARIANT])
            if not eps_list:
                if goal is not None and hi < ZERO and goal.pair.hi.is_finite \
                        and goal.pair.hi.value > 0:
                    eps_list.append(goal.pair.hi.value)
                elif goal is not None and lo > ZERO and goal.pair.lo.is_finite \
                        and goal.pair.lo.value < 0:
                    eps_list.append(-goal.pair.lo.value)
                else:
                    eps_list.append(Fraction(1))
            for w in eps_list:
                out.append((CROSS_ZERO_VARIANT, w))
    else:
        if lo == ONE and hi.is_finite:
            for w in witnesses[WEAK_RH_RIGHT]:
                out.append((WEAK_RH_RIGHT, w))
    return out


def _family_root(subject: WeightExpr) -> tuple:
    """Canonical label of the power family a weight belongs to.

    The search mixes two arrows through interpolation or factorization
    only across genuinely different families: within a single power
    family the axioms generate everything those rules could reach, and
    admitting them there only obscures the canonical constants.
    """
    if subject.is_one:
        return ()
    first = subject.powers[0][1]
    return tuple((name, e / first) for name, e in subject.powers)


def _interp_thetas(f: RCFact, g: RCFact, goal: Optional[Goal]) -> list:
    """Interpolation parameters that send (f, g) subjects onto the goal."""
    if goal is None or goal.subject.is_one:
        return []
    sf, sg, target = dict(f.subject.powers), dict(g.subject.powers), goal.subject
    theta = None
    for name, want in target.powers:
        a = sf.get(name, Fraction(0))
        b = sg.get(name, Fraction(0))
        if a == b:
            if want != b:
                return []
            continue
        t = (want - b) / (a - b)
        if theta is None:
            theta = t
        elif theta != t:
            return []
    if theta is None:
        return []
    # atoms of f/g missing from the goal must cancel at this theta
    for name in set(sf) | set(sg):
        got = theta * sf.get(name, Fraction(0)) + (1 - theta) * sg.get(name, Fraction(0))
        want = dict(target.powers).get(name, Fraction(0))
        if got != want:
            return []
    if 0 <= theta <= 1:
        return [theta]
    return []


# --------------------------------------------------------------------------
# Search
# --------------------------------------------------------------------------

@dataclass
class _Node:
    idx: int
    fact: AnyFact
    rule: Optional[str]
    parents: tuple
    params: dict
    depth: int
    note: str = ""


@dataclass
class _Candidate:
    depth: int
    node_idx: int
    final_shrink: Optional[ExponentPair]
    note: str = ""


class _Search:
    def __init__(self, base: FactBase, goal: Optional[Goal], budget: int,
                 theta_extra, witnesses, node_cap: int, rules):
        self.goal = goal
        self.budget = budget
        self.node_cap = node_cap
        self.rules = tuple(rules)
        self.names = FreshNames()
        self.nodes: list[_Node] = []
        self.index: dict = {}
        self.doubling_nodes: list[int] = []
        self.candidates: list[_Candidate] = []
        self.witnesses = default_witnesses()
        for tag, vals in (witnesses or {}).items():
            self.witnesses[tag] = tuple(self.witnesses.get(tag, ())) + tuple(
                as_fraction(v) for v in vals)
        for entry in base.entries:
            self._add_leaf(entry.fact)
        for dfact in base.doublings:
            idx = len(self.nodes)
            self.nodes.append(_Node(idx, dfact, None, (), {}, 0))
            self.doubling_nodes.append(idx)
        self.pool = theta_pool(
            [e.fact for e in base.entries], goal, theta_extra)
        self.extend_targets = self._weak_extend_targets(base)

    # -- node plumbing -------------------------------------------------

    def _add_leaf(self, fact: RCFact) -> None:
        idx = len(self.nodes)
        self.nodes.append(_Node(idx, fact, None, (), {}, 0))
        self.index[fact.key()] = idx
        self._check_goal(idx)

    def _add(self, fact: RCFact, rule: str, parents: tuple, params: dict,
             note: str = "") -> Optional[int]:
        depth = 1 + max(self.nodes[p].depth for p in parents)
        if depth > self.budget or len(self.nodes) >= self.node_cap:
            return None
        key = fact.key()
        if key in self.index:
            return None
        idx = len(self.nodes)
        self.nodes.append(_Node(idx, fact, rule, parents, params, depth, note))
        self.index[key] = idx
        self._check_goal(idx)
        return idx

    def _check_goal(self, idx: int) -> None:
        goal = self.goal
        if goal is None:
            return
        node = self.nodes[idx]
        fact = node.fact
        if not isinstance(fact, RCFact) or fact.subject != goal.subject:
            return
        if goal.strength == STRONG:
            if fact.weak:
                return
            if fact.pair == goal.pair:
                self.candidates.append(_Candidate(node.depth, idx, None))
            elif fact.pair.contains(goal.pair) and node.depth + 1 <= self.budget:
                self.candidates.append(_Candidate(node.depth + 1, idx, goal.pair))
        else:
            if fact.weak and fact.pair == goal.pair:
                self.candidates.append(_Candidate(node.depth, idx, None))
            elif not fact.weak and goal.pair.lo > ZERO:
                # a strong arrow implies the weak one when the lower mean
                # is a positive power (the doubled-ball mean dominates)
                if fact.pair == goal.pair:
                    self.candidates.append(_Candidate(
                        node.depth, idx, None,
                        "strong arrow implies the weak one (lo > 0)"))
                elif fact.pair.contains(goal.pair) and node.depth + 1 <= self.budget:
                    self.candidates.append(_Candidate(
                        node.depth + 1, idx, goal.pair,
                        "strong arrow implies the weak one (lo > 0)"))

    def _weak_extend_targets(self, base: FactBase) -> tuple:
        vals = set()
        pairs = [e.fact.pair for e in base.entries]
        if self.goal is not None:
            pairs.append(self.goal.pair)
        for pair in pairs:
            for e in (pair.lo, pair.hi):
                if e.is_finite and e.value > 0:
                    vals.add(e.value)
        for d in base.doublings:
            if d.exponent.value > 0:
                vals.add(d.exponent.value)
        return tuple(sorted(vals))

    # -- rule sweeps ------------------------------------------------------

    def _binary_pairs(self, frontier_ids: set, buckets: dict):
        """Same-subject node pairs touching the frontier, each once."""
        for bucket in buckets.values():
            for f in bucket:
                f_new = f.idx in frontier_ids
                for g in bucket:
                    if f.idx == g.idx:
                        continue
                    if f_new or g.idx in frontier_ids:
                        yield f, g

    def _cross_pairs(self, frontier_ids: set, buckets: dict):
        """Distinct-family node pairs touching the frontier, each once."""
        roots = list(buckets)
        for i, ra in enumerate(roots):
            for rb in roots[i + 1:]:
                for f in buckets[ra]:
                    f_new = f.idx in frontier_ids
                    for g in buckets[rb]:
                        if f_new or g.idx in frontier_ids:
                            yield f, g
                            yield g, f

    def _sweep(self, frontier: list, subject_only: Optional[WeightExpr] = None,
               ) -> list:
        """Expand one generation; with ``subject_only`` set, produce only
        facts about that exact subject (used for the final fairness sweep:
        an exact goal match can only carry the goal's subject)."""
        added: list[int] = []

        def add(*args, **kwargs):
            idx = self._add(*args, **kwargs)
            if idx is not None:
                added.append(idx)
            return idx

        frontier_ids = {n.idx for n in frontier}
        # strong facts bucketed by the power family of their subject, so
        # binary rules only ever look at combinable operands
        buckets: dict = {}
        for n in self.nodes:
            if isinstance(n.fact, RCFact) and not n.fact.weak:
                buckets.setdefault(_family_root(n.fact.subject), []).append(n)

        for tag in self.rules:
            if tag == CONCAT:
                for f, g in self._binary_pairs(frontier_ids, buckets):
                    ff, gg = f.fact, g.fact
                    if ff.subject != gg.subject:
                        continue
                    if subject_only is not None and ff.subject != subject_only:
                        continue
                    if ff.pair.hi == gg.pair.lo:
                        add(apply_concat(ff, gg), CONCAT, (f.idx, g.idx), {})
                    elif (ff.pair.lo < gg.pair.lo <= ff.pair.hi
                          and ff.pair.hi < gg.pair.hi):
                        # overlapping arrows: shrink the left one back to
                        # the junction, then concatenate
                        target = ExponentPair(ff.pair.lo, gg.pair.lo)
                        shrunk = apply_shrink(ff, target)
                        sid = add(shrunk, SHRINK, (f.idx,), {"target": target})
                        if sid is None:
                            sid = self.index.get(shrunk.key())
                        if sid is not None:
                            add(apply_concat(self.nodes[sid].fact, gg),
                                CONCAT, (sid, g.idx), {})
            elif tag == CROSS_ZERO or tag in (SELF_IMPROVE_RH, SELF_IMPROVE_LEFT,
                                              SELF_IMPROVE_RHS_TO_AQ,
                                              SELF_IMPROVE_AINF):
                want_tag = tag
                for n in frontier:
                    if not isinstance(n.fact, RCFact):
                        continue
                    if subject_only is not None and n.fact.subject != subject_only:
                        continue
                    for variant, witness in _variant_applications(
                            n.fact, self.witnesses, self.goal):
                        if VARIANT_TAGS[variant] != want_tag:
                            continue
                        try:
                            fact = apply_self_improve(
                                n.fact, variant, witness, self.names)
                        except RuleError:
                            continue
                        add(fact, want_tag, (n.idx,),
                            {"variant": variant, "witness": witness},
                            note=f"{variant} witness {witness}")
            elif tag == FACTOR_IF:
                for f, g in self._cross_pairs(frontier_ids, buckets):
                    ff, gg = f.fact, g.fact
                    if subject_only is not None \
                            and ff.subject * gg.subject != subject_only:
                        continue
                    if not (ff.pair.hi.is_pos_inf and ff.pair.lo < ZERO
                            and ff.pair.lo.is_finite):
                        continue
                    if not (gg.pair.lo.is_neg_inf and gg.pair.hi > ZERO
                            and gg.pair.hi.is_finite):
                        continue
                    add(apply_factor_if(ff, gg), FACTOR_IF, (f.idx, g.idx), {})
            elif tag == INTERPOLATE:
                for f, g in self._cross_pairs(frontier_ids, buckets):
                    for th in _interp_thetas(f.fact, g.fact, self.goal):
                        try:
                            fact = apply_interpolate(f.fact, g.fact, th)
                        except Exception:
                            continue
                        add(fact, INTERPOLATE, (f.idx, g.idx), {"theta": th},
                            note=f"theta {th}")
            elif tag == SCALE:
                # normal form: consecutive scales collapse by composition
                # and scale-after-shrink commutes to shrink-after-scale,
                # so neither is expanded
                for n in frontier:
                    if not isinstance(n.fact, RCFact) or n.rule in (SCALE, SHRINK):
                        continue
                    if subject_only is None:
                        thetas = _fact_thetas(n.fact, self.goal, self.pool)
                    else:
                        ratio = n.fact.subject.power_ratio(subject_only)
                        bad = ratio is None or ratio in (0, 1) \
                            or (n.fact.weak and ratio < 0)
                        thetas = [] if bad else [ratio]
                    for th in thetas:
                        try:
                            fact = apply_scale(n.fact, th)
                        except RuleError:
                            continue
                        add(fact, SCALE, (n.idx,), {"theta": th},
                            note=f"theta {th}")
            elif tag == SHRINK:
                # nested shrinks collapse into one
                for n in frontier:
                    if not isinstance(n.fact, RCFact) or n.rule == SHRINK:
                        continue
                    if subject_only is not None and n.fact.subject != subject_only:
                        continue
                    for target in _shrink_targets(n.fact, self.goal, self.pool):
                        add(apply_shrink(n.fact, target), SHRINK, (n.idx,),
                            {"target": target})
            elif tag == WEAK_EXTEND:
                for n in frontier:
                    if not isinstance(n.fact, RCFact) or not n.fact.weak:
                        continue
                    if subject_only is not None and n.fact.subject != subject_only:
                        continue
                    for val in self.extend_targets:
                        p = Exp.finite(val)
                        if not (ZERO < p < n.fact.pair.lo):
                            continue
                        fact = apply_weak_extend(n.fact, p, self.names)
                        add(fact, WEAK_EXTEND, (n.idx,), {"p": p},
                            note=f"extend left to {p}")
            elif tag == WEAK_PROMOTE:
                weak_new = [n for n in frontier
                            if isinstance(n.fact, RCFact) and n.fact.weak
                            and (subject_only is None
                                 or n.fact.subject == subject_only)]
                for n in weak_new:
                    for didx in self.doubling_nodes:
                        dfact = self.nodes[didx].fact
                        try:
                            fact = apply_weak_promote(n.fact, dfact)
                        except RuleError:
                            continue
                        add(fact, WEAK_PROMOTE, (n.idx, didx), {})
        return [self.nodes[i] for i in added]

    # -- driver --------------------------------------------------------

    def run(self) -> Optional[Derivation]:
        if self.goal is not None and self.goal.subject.is_one \
                and self.goal.strength == STRONG:
            # the constant-one weight sits in every class with unit constant
            leaf = RCFact(ONE_WEIGHT, self.goal.pair)
            return Derivation(
                [TraceNode(0, None, (), leaf, {}, "unit weight axiom")],
                self.goal)
        frontier = list(self.nodes)
        sweeps = 0
        while True:
            best = self._best_candidate(max_depth=sweeps)
            if best is not None:
                return self._extract(best)
            if sweeps >= self.budget or not frontier \
                    or len(self.nodes) >= self.node_cap:
                break
            if any(c.depth == sweeps + 1 for c in self.candidates):
                # only shrink-completed candidates are pending; an exact
                # match one level deeper could still win the tie, and it
                # must carry the goal subject, so sweep just for those
                self._sweep(frontier, subject_only=self.goal.subject)
                sweeps += 1
                continue
            frontier = self._sweep(frontier)
            sweeps += 1
        best = self._best_candidate(max_depth=self.budget)
        return self._extract(best) if best is not None else None

    def _best_candidate(self, max_depth: int) -> Optional[_Candidate]:
        live = [c for c in self.candidates if c.depth <= max_depth]
        if not live:
            return None

        def rank(c: _Candidate):
            deriv = self._extract(c)
            return (c.depth, not deriv.goal_fact.constant.evaluable,
                    deriv.tag_sequence(), c.node_idx)

        return min(live, key=rank)

    def _extract(self, cand: _Candidate) -> Derivation:
        order: list[int] = []
        seen: set[int] = set()

        def visit(i: int) -> None:
            if i in seen:
                return
            seen.add(i)
            for p in self.nodes[i].parents:
                visit(p)
            order.append(i)

        visit(cand.node_idx)
        order.sort()
        # normalize: re-execute in trace order with a fresh allocator so
        # existential serials depend only on the trace, not on the search.
        names = FreshNames()
        remap: dict[int, int] = {}
        rebuilt: dict[int, AnyFact] = {}
        out: list[TraceNode] = []
        for new_idx, old_idx in enumerate(order):
            node = self.nodes[old_idx]
            remap[old_idx] = new_idx
            if node.rule is None:
                fact: AnyFact = node.fact
            else:
                parents = [rebuilt[p] for p in node.parents]
                fact = execute_rule(node.rule, parents, node.params, names)
            rebuilt[old_idx] = fact
            out.append(TraceNode(
                new_idx, node.rule, tuple(remap[p] for p in node.parents),
                fact, dict(node.params), node.note))
        if cand.final_shrink is not None:
            parent_idx = remap[cand.node_idx]
            fact = apply_shrink(rebuilt[cand.node_idx], cand.final_shrink)
            out.append(TraceNode(
                len(out), SHRINK, (parent_idx,), fact,
                {"target": cand.final_shrink}, cand.note))
        elif cand.note:
            out[-1].note = (out[-1].note + "; " + cand.note).strip("; ")
        return Derivation(out, self.goal)


def derive(base: FactBase, goal: Goal, budget: int = 8,
           theta_extra: Iterable = (), witnesses: Optional[dict] = None,
           node_cap: int = 4000, rules: Iterable = SEARCH_RULES,
           ) -> Optional[Derivation]:
    """Search for the shallowest derivation of ``goal`` from ``base``.

    Returns None when the budget (or the node cap guarding the continuum
    of scaling powers) is exhausted; absence is a result, not an error.
    """
    return _Search(base, goal, budget, theta_extra, witnesses,
                   node_cap, rules).run()


# --------------------------------------------------------------------------
# Oscillation classification
# --------------------------------------------------------------------------

BMO = "BMO"
BLO = "BLO"
BUO = "BUO"
HARNACK = "Harnack"


def classify_log(base: FactBase, subject: WeightExpr, budget: int = 8,
                 theta_extra: Iterable = (), witnesses: Optional[dict] = None,
                 node_cap: int = 4000) -> set:
    """Oscillation classes of log(subject) certified by derivable arrows.

    BMO needs any strong arrow for some power subject^alpha (alpha != 0);
    BLO an arrow reaching -inf for a positive power; BUO an arrow reaching
    +inf for a positive power; Harnack the full axis.  The power alpha is
    searched over the same finite candidate generator as scaling, so a
    miss is a budget answer, not a proof of absence.
    """
    search = _Search(base, None, budget, theta_extra, witnesses,
                     node_cap, SEARCH_RULES)
    frontier = list(search.nodes)
    for _ in range(budget):
        if not frontier or len(search.nodes) >= search.node_cap:
            break
        frontier = search._sweep(frontier)
    out: set = set()
    for node in search.nodes:
        fact = node.fact
        if not isinstance(fact, RCFact) or fact.weak:
            continue
        alpha = subject.power_ratio(fact.subject)
        if alpha is None or alpha == 0:
            continue
        out.add(BMO)
        if fact.pair.lo.is_neg_inf and fact.pair.hi.is_pos_inf:
            out.add(HARNACK)
            out.update({BLO, BUO} if alpha > 0 else {BUO, BLO})
        if alpha > 0:
            if fact.pair.lo.is_neg_inf:
                out.add(BLO)
            if fact.pair.hi.is_pos_inf:
                out.add(BUO)
    return out
