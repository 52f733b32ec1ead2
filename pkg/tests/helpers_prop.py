"""Randomized property suites shared by test_properties and the
acceptance gate.

Each runner draws `n` seeded cases, returns the list of failure messages
(empty means the property held everywhere), and is deterministic for a
fixed seed.
"""

import math
import random
from fractions import Fraction as F

from rcweights.constants import ConstExpr, FreshNames
from rcweights.engine import Derivation, TraceNode, execute_rule, replay
from rcweights.exponents import Exp, ExponentPair, NEG_INF, POS_INF
from rcweights.facts import Goal, RCFact, STRONG, WEAK
from rcweights.rules import RuleError, apply_concat, apply_scale
from rcweights.numlab import (
    Ball, Domain, constant_weight, max_power_const, p_mean,
    piecewise_constant, power_weight,
)

DOM = Domain(-1.0, 1.0)

P_PALETTE = [-math.inf, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0,
             3.0, math.inf]


def random_weight(rng):
    kind = rng.randrange(6)
    if kind == 0:
        return power_weight(rng.uniform(-0.9, 3.0))
    if kind == 1:
        return constant_weight(rng.uniform(0.2, 5.0))
    if kind == 2:
        cuts = sorted(rng.uniform(-0.9, 0.9) for _ in range(2))
        vals = [rng.uniform(0.2, 5.0) for _ in range(3)]
        return piecewise_constant(cuts, vals)
    if kind == 3:
        return max_power_const(rng.uniform(0.5, 3.0), rng.uniform(0.1, 0.9))
    if kind == 4:
        return power_weight(rng.uniform(-0.5, 2.0)) * power_weight(
            rng.uniform(-0.4, 2.0))
    return power_weight(rng.uniform(0.2, 2.0), center=0.0) * power_weight(
        rng.uniform(0.2, 2.0), center=rng.uniform(-0.5, 0.5))


def random_ball(rng):
    center = rng.uniform(-0.7, 0.7)
    rmax = DOM.max_admissible_radius(center)
    return Ball(center, rng.uniform(0.02, rmax * 0.98))


def holder_monotonicity(n=1000, seed=20260809, resolution=160):
    """p <= q implies p-mean <= q-mean, on both evaluation paths."""
    rng = random.Random(seed)
    failures = []
    for case in range(n):
        w = random_weight(rng)
        ball = random_ball(rng)
        p, q = sorted(rng.sample(P_PALETTE, 2))
        method = "quadrature" if case % 2 else "auto"
        a = p_mean(w, ball, p, resolution=resolution, method=method)
        b = p_mean(w, ball, q, resolution=resolution, method=method)
        if math.isinf(a) and not math.isinf(b):
            failures.append(f"case {case}: mean({p})=inf but mean({q})={b}")
        elif not math.isinf(a) and a > 0.0 and not math.isinf(b) \
                and not a <= b * (1 + 1e-10):
            failures.append(
                f"case {case}: mean({p})={a} > mean({q})={b} "
                f"[{w.describe()} on {ball}, {method}]")
    return failures


def scaling_identity(n=1000, seed=20260809, resolution=160):
    """mean_p(w^t) equals mean_{tp}(w)^t to 1e-10 on shared nodes."""
    rng = random.Random(seed)
    failures = []
    thetas = [0.5, 2.0, 3.0, -0.5, -1.0, -2.0, 1.5]
    for case in range(n):
        w = random_weight(rng)
        ball = random_ball(rng)
        theta = rng.choice(thetas)
        p = rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
        method = "quadrature" if case % 2 else "auto"
        lhs = p_mean(w ** theta, ball, p, resolution=resolution, method=method)
        raw = p_mean(w, ball, theta * p, resolution=resolution, method=method)
        if math.isinf(raw):
            rhs = math.inf if theta > 0 else 0.0
        elif raw == 0.0:
            rhs = 0.0 if theta > 0 else math.inf
        else:
            rhs = raw ** theta
        if math.isinf(lhs) or math.isinf(rhs) or lhs == 0.0 or rhs == 0.0:
            if lhs != rhs:
                failures.append(
                    f"case {case}: sentinel mismatch {lhs} vs {rhs} "
                    f"[{w.describe()}, theta={theta}, p={p}]")
        elif abs(lhs - rhs) > 1e-10 * max(abs(lhs), abs(rhs)):
            failures.append(
                f"case {case}: {lhs!r} != {rhs!r} "
                f"[{w.describe()}, theta={theta}, p={p}, {method}]")
    return failures


def random_exp(rng, allow_inf=True):
    if allow_inf and rng.random() < 0.15:
        return NEG_INF if rng.random() < 0.5 else POS_INF
    return Exp.finite(F(rng.randint(-12, 12), rng.randint(1, 6)))


def random_pair(rng):
    while True:
        a, b = random_exp(rng), random_exp(rng)
        if a < b:
            return ExponentPair(a, b)
        if b < a:
            return ExponentPair(b, a)


def random_const(rng):
    out = ConstExpr()
    for label in ("C1", "C2", "C3"):
        if rng.random() < 0.7:
            out = out * (ConstExpr.atom(label) ** F(rng.randint(1, 5),
                                                    rng.randint(1, 3)))
    return out


def random_theta(rng):
    while True:
        t = F(rng.randint(-8, 8), rng.randint(1, 5))
        if t != 0:
            return t


def scale_round_trip(n=1000, seed=20260809):
    """Scaling by theta then 1/theta restores a fact exactly."""
    from rcweights.wexpr import WeightExpr
    rng = random.Random(seed)
    failures = []
    w = WeightExpr.atom("w")
    for case in range(n):
        weak = rng.random() < 0.3
        fact = RCFact(w ** F(rng.randint(1, 4), rng.randint(1, 3)),
                      random_pair(rng), random_const(rng),
                      WEAK if weak else STRONG)
        theta = random_theta(rng)
        if weak and theta < 0:
            theta = -theta
        back = apply_scale(apply_scale(fact, theta), 1 / theta)
        if back != fact:
            failures.append(f"case {case}: {back} != {fact} (theta={theta})")
    return failures


def concat_constant_product(n=1000, seed=20260809):
    """Concatenation multiplies constants, canonically."""
    from rcweights.wexpr import WeightExpr
    rng = random.Random(seed)
    failures = []
    w = WeightExpr.atom("w")
    for case in range(n):
        cuts = sorted({random_exp(rng), random_exp(rng), random_exp(rng)},
                      key=lambda e: (e.inf, e.value))
        if len(cuts) < 3:
            continue
        r, s, t = cuts
        c1, c2 = random_const(rng), random_const(rng)
        f = RCFact(w, ExponentPair(r, s), c1)
        g = RCFact(w, ExponentPair(s, t), c2)
        out = apply_concat(f, g)
        if out.constant != c1 * c2 or out.pair != ExponentPair(r, t):
            failures.append(f"case {case}: {out} from {f} + {g}")
    return failures


def _random_step(rng, nodes, names):
    """Try to extend a random chain by one applicable rule application."""
    from rcweights.rules import CROSS_ZERO_VARIANT, RH_RIGHT, RH_TO_AQ
    idx = rng.randrange(len(nodes))
    fact = nodes[idx].fact
    if not isinstance(fact, RCFact):
        return None
    roll = rng.randrange(6)
    if roll == 0 and not fact.weak:
        pair = fact.pair
        lo = pair.lo if rng.random() < 0.5 or not pair.lo.is_finite \
            else Exp.finite(pair.lo.value + F(1, 7))
        hi = pair.hi if rng.random() < 0.5 or not pair.hi.is_finite \
            else Exp.finite(pair.hi.value - F(1, 7))
        if not lo < hi or not fact.pair.contains(ExponentPair(lo, hi)):
            return None
        return "SHRINK", (idx,), {"target": ExponentPair(lo, hi)}
    if roll == 1:
        theta = random_theta(rng)
        if fact.weak and theta < 0:
            theta = -theta
        return "SCALE", (idx,), {"theta": theta}
    if roll == 2 and not fact.weak:
        jdx = rng.randrange(len(nodes))
        other = nodes[jdx].fact
        if isinstance(other, RCFact) and not other.weak \
                and other.subject == fact.subject \
                and fact.pair.hi == other.pair.lo:
            return "CONCAT", (idx, jdx), {}
        return None
    if roll == 3 and not fact.weak:
        variants = []
        lo, hi = fact.pair.lo, fact.pair.hi
        if hi == Exp.finite(1) and lo < Exp.finite(0):
            variants.append((RH_RIGHT, F(1, 2)))
        if lo == Exp.finite(1) and hi.is_finite:
            variants.append((RH_TO_AQ, F(3)))
        if hi < Exp.finite(0) or lo > Exp.finite(0):
            variants.append((CROSS_ZERO_VARIANT, F(1, 3)))
        if not variants:
            return None
        variant, witness = rng.choice(variants)
        tag = {"RH_RIGHT": "SELF_IMPROVE_RH", "RH_TO_AQ":
               "SELF_IMPROVE_RHS_TO_AQ", "CROSS_ZERO": "CROSS_ZERO"}[variant]
        return tag, (idx,), {"variant": variant, "witness": witness}
    if roll == 4 and fact.weak and fact.pair.lo > Exp.finite(0) \
            and fact.pair.lo.is_finite:
        p = Exp.finite(fact.pair.lo.value / 2)
        return "WEAK_EXTEND", (idx,), {"p": p}
    return None


def replay_bit_exact(n=1000, seed=20260809):
    """Random rule chains replay to bit-identical facts."""
    from rcweights.wexpr import WeightExpr
    rng = random.Random(seed)
    failures = []
    w = WeightExpr.atom("w")
    for case in range(n):
        names = FreshNames()
        weak = rng.random() < 0.25
        base = RCFact(w, random_pair(rng), random_const(rng),
                      WEAK if weak else STRONG)
        nodes = [TraceNode(0, None, (), base)]
        steps = 0
        attempts = 0
        while steps < 4 and attempts < 30:
            attempts += 1
            plan = _random_step(rng, nodes, names)
            if plan is None:
                continue
            tag, parents, params = plan
            try:
                fact = execute_rule(tag, [nodes[p].fact for p in parents],
                                    params, names)
            except Exception:
                continue
            nodes.append(TraceNode(len(nodes), tag, parents, fact, params))
            steps += 1
        if steps == 0:
            continue
        deriv = Derivation(nodes, Goal(nodes[-1].fact.subject,
                                       nodes[-1].fact.pair,
                                       nodes[-1].fact.strength))
        try:
            rebuilt = replay(deriv)
        except RuleError as exc:
            failures.append(f"case {case}: replay raised {exc}")
            continue
        if rebuilt != deriv.goal_fact:
            failures.append(f"case {case}: {rebuilt} != {deriv.goal_fact}")
    return failures


ALL_PROPERTY_SUITES = (
    ("holder-monotonicity", holder_monotonicity),
    ("scaling-identity", scaling_identity),
    ("scale-round-trip", scale_round_trip),
    ("concat-constant-product", concat_constant_product),
    ("replay-bit-exact", replay_bit_exact),
)
