"""Rule applications: the three axioms and the derived rewriting rules.

Each ``apply_*`` function checks its preconditions, raises ``RuleError``
when they fail, and otherwise returns new facts whose constants are built
only from the parents' constants and fresh existential atoms.  The three
axioms carry exact constant arithmetic:

* shrinking keeps the constant;
* concatenation multiplies the two constants;
* scaling by theta raises the constant to the power |theta|.

Everything else (weak promotion, weak extension, self-improvement,
interpolation, factorization) is layered on the same bookkeeping.  The
self-improvement family is qualitative: the produced endpoint is a caller
chosen witness value and the produced constant is a fresh existential.
"""

from __future__ import annotations

from typing import Optional

from .constants import ConstExpr, DEFAULT_NAMES, FreshNames, scale_const
from .exponents import (
    Exp, ExponentPair, NEG_INF, ONE, POS_INF, ZERO,
    as_exp, as_fraction, scale_pair, interpolate_exponents,
)
from .facts import DoublingFact, RCFact, STRONG, WEAK
from .wexpr import WeightExpr

# Rule tags, also the vocabulary of serialized proof traces.
SHRINK = "SHRINK"
SPLIT = "SPLIT"
CONCAT = "CONCAT"
SCALE = "SCALE"
WEAK_PROMOTE = "WEAK_PROMOTE"
WEAK_EXTEND = "WEAK_EXTEND"
SELF_IMPROVE_RH = "SELF_IMPROVE_RH"
SELF_IMPROVE_LEFT = "SELF_IMPROVE_LEFT"
SELF_IMPROVE_RHS_TO_AQ = "SELF_IMPROVE_RHS_TO_AQ"
SELF_IMPROVE_AINF = "SELF_IMPROVE_AINF"
CROSS_ZERO = "CROSS_ZERO"
INTERPOLATE = "INTERPOLATE"
FACTOR_IF = "FACTOR_IF"
FACTOR_ONLYIF = "FACTOR_ONLYIF"
JONES = "JONES"

ALL_TAGS = (
    SHRINK, SPLIT, CONCAT, SCALE, WEAK_PROMOTE, WEAK_EXTEND,
    SELF_IMPROVE_RH, SELF_IMPROVE_LEFT, SELF_IMPROVE_RHS_TO_AQ,
    SELF_IMPROVE_AINF, CROSS_ZERO, INTERPOLATE, FACTOR_IF,
    FACTOR_ONLYIF, JONES,
)

# Self-improvement variants (argument to apply_self_improve).
RH_RIGHT = "RH_RIGHT"
AP_LEFT = "AP_LEFT"
RH_TO_AQ = "RH_TO_AQ"
AINF_TO_AR = "AINF_TO_AR"
WEAK_RH_RIGHT = "WEAK_RH_RIGHT"
CROSS_ZERO_VARIANT = "CROSS_ZERO"

VARIANT_TAGS = {
    RH_RIGHT: SELF_IMPROVE_RH,
    AP_LEFT: SELF_IMPROVE_LEFT,
    RH_TO_AQ: SELF_IMPROVE_RHS_TO_AQ,
    AINF_TO_AR: SELF_IMPROVE_AINF,
    WEAK_RH_RIGHT: SELF_IMPROVE_RH,
    CROSS_ZERO_VARIANT: CROSS_ZERO,
}


class RuleError(ValueError):
    """A rule was applied outside its precondition."""


def _require_strong(fact: RCFact, rule: str) -> None:
    if fact.weak:
        raise RuleError(f"{rule} needs a strong fact, got a weak one")


# --------------------------------------------------------------------------
# Axioms
# --------------------------------------------------------------------------

def apply_shrink(fact: RCFact, target: ExponentPair) -> RCFact:
    """Shrink an arrow to a nested pair; the constant never worsens."""
    _require_strong(fact, SHRINK)
    if not fact.pair.contains(target):
        raise RuleError(f"{target} is not nested in {fact.pair}")
    return RCFact(fact.subject, target, fact.constant, STRONG)


def apply_split(fact: RCFact, cut) -> tuple:
    """Split an arrow at an interior point into two arrows (two shrinks)."""
    c = as_exp(cut)
    _require_strong(fact, SPLIT)
    if not (fact.pair.lo < c < fact.pair.hi):
        raise RuleError(f"cut {c} is not interior to {fact.pair}")
    left = RCFact(fact.subject, ExponentPair(fact.pair.lo, c), fact.constant, STRONG)
    right = RCFact(fact.subject, ExponentPair(c, fact.pair.hi), fact.constant, STRONG)
    return left, right


def apply_concat(f: RCFact, g: RCFact) -> RCFact:
    """Concatenate abutting arrows; constants multiply."""
    _require_strong(f, CONCAT)
    _require_strong(g, CONCAT)
    if f.subject != g.subject:
        raise RuleError(f"subject mismatch: {f.subject} vs {g.subject}")
    if f.pair.hi != g.pair.lo:
        raise RuleError(
            f"arrows do not abut: first ends at {f.pair.hi}, second starts at {g.pair.lo}")
    return RCFact(f.subject, ExponentPair(f.pair.lo, g.pair.hi),
                  f.constant * g.constant, STRONG)


def apply_scale(fact: RCFact, theta) -> RCFact:
    """Transport a fact under w -> w^theta.

    Weak facts may only be scaled by theta > 0: the asymmetric doubled
    ball on the left mean does not survive the endpoint swap a negative
    power performs.
    """
    th = as_fraction(theta)
    if th == 0:
        raise RuleError("scaling by zero")
    if fact.weak and th < 0:
        raise RuleError("weak facts cannot be scaled by a negative power")
    return RCFact(
        fact.subject ** th,
        scale_pair(fact.pair, th),
        scale_const(fact.constant, th),
        fact.strength,
    )


# --------------------------------------------------------------------------
# Weak-class rules
# --------------------------------------------------------------------------

def promote_exponent(fact: RCFact) -> Exp:
    """Exponent whose doubling turns this weak fact solid.

    Normally the left endpoint r (the mean taken over the doubled ball).
    When the left endpoint is an infinity the finite endpoint is the one
    whose doubling matters, as in the lower half of a Harnack chain.
    """
    if fact.pair.lo.is_finite and fact.pair.lo.value != 0:
        return fact.pair.lo
    if fact.pair.lo.is_neg_inf and fact.pair.hi.is_finite and fact.pair.hi.value != 0:
        return fact.pair.hi
    raise RuleError(f"weak fact {fact.pair} has no finite nonzero promotion exponent")


def apply_weak_promote(fact: RCFact, doubling: DoublingFact) -> RCFact:
    """Turn a dashed arrow solid using a matching doubling weight."""
    if not fact.weak:
        raise RuleError("promotion applies to weak facts only")
    e = promote_exponent(fact)
    want = fact.subject ** e.value
    if doubling.powered() != want:
        raise RuleError(
            f"doubling fact is about {doubling.powered()}, promotion needs {want}")
    return RCFact(fact.subject, fact.pair,
                  fact.constant * doubling.constant, STRONG)


def apply_weak_extend(fact: RCFact, p, names: Optional[FreshNames] = None) -> RCFact:
    """Extend a weak arrow left to any 0 < p < lo; new constant existential."""
    if not fact.weak:
        raise RuleError("weak extension applies to weak facts only")
    pe = as_exp(p)
    if not (ZERO < pe < fact.pair.lo):
        raise RuleError(f"extension exponent must satisfy 0 < p < {fact.pair.lo}, got {pe}")
    names = names or DEFAULT_NAMES
    const = ConstExpr.existential(
        names, f"weak-class left extension of a constant built on {fact.constant}")
    return RCFact(fact.subject, ExponentPair(pe, fact.pair.hi), const, WEAK)


# --------------------------------------------------------------------------
# Self-improvement (qualitative: witness endpoints, existential constants)
# --------------------------------------------------------------------------

def _fresh(names: Optional[FreshNames], constraint: str) -> ConstExpr:
    return ConstExpr.existential(names or DEFAULT_NAMES, constraint)


def apply_self_improve(fact: RCFact, variant: str, witness,
                       names: Optional[FreshNames] = None) -> RCFact:
    """Open-endpoint improvement of an arrow.

    The improvement is existential in nature; ``witness`` supplies the
    concrete value used for the new endpoint and is recorded in the trace,
    while the produced constant is always a fresh existential atom.
    """
    w = as_fraction(witness)
    pair, lo, hi = fact.pair, fact.pair.lo, fact.pair.hi

    if variant == RH_RIGHT:
        _require_strong(fact, variant)
        if hi != ONE or not (lo < ZERO):
            raise RuleError(f"{variant} needs an A-class shaped pair, got {pair}")
        if w <= 0:
            raise RuleError("witness delta must be positive")
        return RCFact(fact.subject, ExponentPair(lo, Exp.finite(1 + w)),
                      _fresh(names, "some delta > 0: A-class weights satisfy a "
                                    "reverse Holder inequality just past 1"),
                      STRONG)

    if variant == AP_LEFT:
        _require_strong(fact, variant)
        if hi != ONE or not lo.is_finite or lo.value >= 0:
            raise RuleError(f"{variant} needs a finite A-class shaped pair, got {pair}")
        p = 1 - 1 / lo.value
        if not (0 < w < p - 1):
            raise RuleError(f"witness epsilon must lie in (0, {p - 1})")
        new_lo = Exp.finite(1 / (1 - (p - w)))
        return RCFact(fact.subject, ExponentPair(new_lo, ONE),
                      _fresh(names, "some eps > 0: the A-class index is open on the left"),
                      STRONG)

    if variant == RH_TO_AQ:
        _require_strong(fact, variant)
        if lo != ONE or not hi.is_finite:
            raise RuleError(f"{variant} needs a finite RH shaped pair, got {pair}")
        if w <= 1:
            raise RuleError("witness q must exceed 1")
        return RCFact(fact.subject, ExponentPair(Exp.finite(1 / (1 - w)), ONE),
                      _fresh(names, "some q > 1: reverse Holder weights lie in "
                                    "an A-class"),
                      STRONG)

    if variant == AINF_TO_AR:
        _require_strong(fact, variant)
        if pair != ExponentPair(ZERO, ONE):
            raise RuleError(f"{variant} needs the (0,1) pair, got {pair}")
        if w <= 1:
            raise RuleError("witness r must exceed 1")
        return RCFact(fact.subject, ExponentPair(Exp.finite(1 / (1 - w)), ONE),
                      _fresh(names, "some finite r > 1: the limiting A-class "
                                    "collapses to a finite index"),
                      STRONG)

    if variant == WEAK_RH_RIGHT:
        if not fact.weak:
            raise RuleError(f"{variant} applies to weak facts")
        if lo != ONE or not hi.is_finite:
            raise RuleError(f"{variant} needs a finite weak RH pair, got {pair}")
        if w <= 0:
            raise RuleError("witness eps must be positive")
        return RCFact(fact.subject, ExponentPair(ONE, Exp.finite(hi.value + w)),
                      _fresh(names, "some eps > 0: weak reverse Holder ranges "
                                    "are open on the right"),
                      WEAK)

    if variant == CROSS_ZERO_VARIANT:
        _require_strong(fact, variant)
        if w <= 0:
            raise RuleError("witness eps must be positive")
        if hi < ZERO:
            # wholly negative arrow stretches right across zero
            return RCFact(fact.subject, ExponentPair(lo, Exp.finite(w)),
                          _fresh(names, "some eps > 0: negative arrows cross zero"),
                          STRONG)
        if lo > ZERO:
            return RCFact(fact.subject, ExponentPair(Exp.finite(-w), hi),
                          _fresh(names, "some eps > 0: positive arrows cross zero"),
                          STRONG)
        raise RuleError(f"pair {pair} already touches or crosses zero")

    raise RuleError(f"unknown self-improvement variant {variant!r}")


# --------------------------------------------------------------------------
# Interpolation and factorization
# --------------------------------------------------------------------------

def apply_interpolate(f: RCFact, g: RCFact, theta) -> RCFact:
    """Geometric interpolation of two zero-crossing arrows."""
    _require_strong(f, INTERPOLATE)
    _require_strong(g, INTERPOLATE)
    th = as_fraction(theta)
    pair = interpolate_exponents(f.pair.lo, g.pair.lo, f.pair.hi, g.pair.hi, th)
    if th == 0:
        subject = g.subject
    elif th == 1:
        subject = f.subject
    else:
        subject = (f.subject ** th) * (g.subject ** (1 - th))
    const = (f.constant ** th) * (g.constant ** (1 - th))
    return RCFact(subject, pair, const, STRONG)


def apply_factor_if(f: RCFact, g: RCFact) -> RCFact:
    """Product direction of factorization: the factors must touch opposite
    infinities -- f spans (r, inf) with r < 0 and g spans (-inf, s) with
    s > 0 -- and then the product lands in (r, s) with constant product."""
    _require_strong(f, FACTOR_IF)
    _require_strong(g, FACTOR_IF)
    r, s = f.pair.lo, g.pair.hi
    if not f.pair.hi.is_pos_inf or not (r < ZERO):
        raise RuleError(f"first factor must span (r, inf) with r < 0, got {f.pair}")
    if not g.pair.lo.is_neg_inf or not (s > ZERO):
        raise RuleError(f"second factor must span (-inf, s) with s > 0, got {g.pair}")
    return RCFact(f.subject * g.subject, ExponentPair(r, s),
                  f.constant * g.constant, STRONG)


def apply_factor_onlyif(fact: RCFact, names: Optional[FreshNames] = None,
                        atom_names: tuple = ("u", "v")) -> tuple:
    """Existence direction of factorization for a zero-crossing arrow.

    Produces fresh weight atoms u, v with u spanning (r, inf), v spanning
    (-inf, s), existential constants, plus the identity subject = u*v.
    The split is nonconstructive, so nothing links the new constants to
    the old one.
    """
    _require_strong(fact, FACTOR_ONLYIF)
    if not fact.pair.crosses_zero():
        raise RuleError(f"pair {fact.pair} does not cross zero")
    names = names or DEFAULT_NAMES
    u = WeightExpr.atom(atom_names[0])
    v = WeightExpr.atom(atom_names[1])
    fu = RCFact(u, ExponentPair(fact.pair.lo, POS_INF),
                _fresh(names, "factor constant from a nonconstructive splitting"),
                STRONG)
    fv = RCFact(v, ExponentPair(NEG_INF, fact.pair.hi),
                _fresh(names, "factor constant from a nonconstructive splitting"),
                STRONG)
    return fu, fv, (fact.subject, u * v)


def apply_jones(fact: RCFact, names: Optional[FreshNames] = None,
                atom_names: tuple = ("w1", "w2")) -> tuple:
    """A-class factorization: subject = w1 * w2^(1-p) with w1, w2 in A(1)."""
    _require_strong(fact, JONES)
    lo, hi = fact.pair.lo, fact.pair.hi
    if hi != ONE or not lo.is_finite or lo.value >= 0:
        raise RuleError(f"{JONES} needs a finite A-class shaped pair, got {fact.pair}")
    p = 1 - 1 / lo.value
    names = names or DEFAULT_NAMES
    a1 = ExponentPair(NEG_INF, ONE)
    w1 = WeightExpr.atom(atom_names[0])
    w2 = WeightExpr.atom(atom_names[1])
    f1 = RCFact(w1, a1, _fresh(names, "A(1) factor from a nonconstructive splitting"),
                STRONG)
    f2 = RCFact(w2, a1, _fresh(names, "A(1) factor from a nonconstructive splitting"),
                STRONG)
    return f1, f2, (fact.subject, w1 * (w2 ** (1 - p)))
