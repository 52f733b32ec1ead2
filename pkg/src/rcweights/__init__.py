"""rcweights: a calculus of reverse classes for weights.

Symbolic layer: exact exponent arithmetic, weight and constant algebra,
reverse-class facts, and a derivation engine that applies the shrinking /
concatenation / scaling axioms (plus the derived qualitative rules) while
tracking reversal constants.  Numerical layer: p-means over admissible
ball families on an interval, empirical reversal-constant estimates, and
packaged experiments.  A diagram renderer draws fact sets and proof
traces as arrows on the extended real line.
"""

from .constants import Atom, ConstExpr, FreshNames, NotEvaluable, ONE_CONST, scale_const
from .engine import (
    BLO, BMO, BUO, Derivation, HARNACK, SEARCH_RULES, TraceNode, classify_log,
    default_witnesses, derive, execute_rule, replay,
)
from .exponents import (
    Exp, ExponentError, ExponentPair, NEG_INF, POS_INF, ZERO, ap_exponent,
    ap_index, as_exp, as_fraction, holder_conjugate, interpolate_exponents,
    scale_pair,
)
from .facts import (
    DoublingFact, FactBase, FactFile, FactFileError, Goal, Origin, RCFact,
    STRONG, WEAK, WEAK_DILATION, class_token, name_class, parse_class,
    parse_class_token, parse_fact_file, parse_goal,
)
from .rules import (
    AINF_TO_AR, AP_LEFT, CROSS_ZERO_VARIANT, RH_RIGHT, RH_TO_AQ, RuleError,
    WEAK_RH_RIGHT, apply_concat, apply_factor_if, apply_factor_onlyif,
    apply_interpolate, apply_jones, apply_scale, apply_self_improve,
    apply_shrink, apply_split, apply_weak_extend, apply_weak_promote,
)
from .wexpr import ONE_WEIGHT, WeightExpr, WeightSyntaxError, parse_weight

__version__ = "0.1.0"
