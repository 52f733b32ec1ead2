"""Empirical reversal-constant estimation over finite ball families.

The reported supremum is always a lower bound for the true reversal
constant: the family is finite.  A single divergent ball (sentinel ratio)
flags the pair as empirically violated -- that is a finding, not an
error.  Reduction over balls is sequential and arg-max ties break toward
the lowest ball index, so reports are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..exponents import Exp, as_exp
from .balls import BallFamily
from .means import (
    AUTO, DEFAULT_RESOLUTION, reversal_ratio, weak_reversal_ratio,
)
from .weights import Weight

STRONG_MODE = "strong"
WEAK_MODE = "weak"


def _encode(x: float):
    if math.isinf(x):
        return "inf"
    if x == 0.0:
        return "zero"
    return x


@dataclass
class EstimateReport:
    """Sup-of-ratios result for one weight and one exponent pair."""

    r: Exp
    s: Exp
    mode: str
    ratios: list
    sup: float
    argmax_index: int
    divergent: bool
    resolution: int
    method: str
    weight: str
    family_meta: dict
    n_balls: int

    @property
    def argmax_ball(self):
        return self._argmax_ball

    def to_dict(self) -> dict:
        ball = self._argmax_ball
        return {
            "schema": "rcweights.estimate/1",
            "weight": self.weight,
            "pair": [str(self.r), str(self.s)],
            "mode": self.mode,
            "sup": _encode(self.sup),
            "divergent": self.divergent,
            "argmax_index": self.argmax_index,
            "argmax_ball": {"center": ball.center, "radius": ball.radius},
            "n_balls": self.n_balls,
            "resolution": self.resolution,
            "method": self.method,
            "family": self.family_meta,
            "ratios": [_encode(v) for v in self.ratios],
            "note": "finite-family estimate: a lower bound for the true constant",
        }


def _estimate(weight: Weight, family: BallFamily, r, s, resolution: int,
              method: str, mode: str) -> EstimateReport:
    if len(family) == 0:
        raise ValueError("empty ball family")
    re_, se_ = as_exp(r), as_exp(s)
    ratio_fn = reversal_ratio if mode == STRONG_MODE else weak_reversal_ratio
    ratios = []
    for ball in family:
        ratios.append(ratio_fn(weight, ball, re_, se_, resolution, method,
                               family.domain))
    sup = -math.inf
    argmax = 0
    for i, v in enumerate(ratios):
        if v > sup:
            sup, argmax = v, i
    report = EstimateReport(
        r=re_, s=se_, mode=mode, ratios=ratios, sup=sup,
        argmax_index=argmax, divergent=math.isinf(sup),
        resolution=resolution, method=method, weight=weight.describe(),
        family_meta=family.meta_dict(), n_balls=len(family))
    report._argmax_ball = family.balls[argmax]
    return report


def estimate_constant(weight: Weight, family: BallFamily, r, s,
                      resolution: int = DEFAULT_RESOLUTION,
                      method: str = AUTO) -> EstimateReport:
    """Empirical reversal constant of the pair (r, s) on the family."""
    return _estimate(weight, family, r, s, resolution, method, STRONG_MODE)


def weak_estimate(weight: Weight, family: BallFamily, r, s,
                  resolution: int = DEFAULT_RESOLUTION,
                  method: str = AUTO) -> EstimateReport:
    """Weak-class variant: lower mean over the doubled ball."""
    return _estimate(weight, family, r, s, resolution, method, WEAK_MODE)


def power_ap_oracle(a: float, n: int, p) -> bool:
    """Analytic membership of |x|^a in the A-class of index p on R^n.

    For 1 < p < infinity the criterion is -n < a < n(p-1).  The p = 1
    boundary form -n < a <= 0 is the standard degenerate limit; it is an
    extension of the criterion, not part of it, and is flagged here so
    callers know the boundary case rests on a different argument.
    """
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    pe = as_exp(p)
    if pe.is_pos_inf or (pe.is_finite and pe.value < 1):
        raise ValueError(f"oracle defined for 1 <= p < inf, got {pe}")
    pf = float(pe.value)
    if pf == 1.0:
        return -n < a <= 0.0
    return -n < a < n * (pf - 1.0)


def stability_probe(weight: Weight, family: BallFamily, r, s,
                    resolution: int, method: str = AUTO,
                    factor: int = 2) -> dict:
    """Estimate at two resolutions and report the relative drift.

    On the exact path the drift is zero by construction; the probe is
    informative on the quadrature path and for foreign weights.
    """
    first = _estimate(weight, family, r, s, resolution, method, STRONG_MODE)
    second = _estimate(weight, family, r, s, resolution * factor, method,
                       STRONG_MODE)
    if math.isinf(first.sup) or math.isinf(second.sup):
        rel = math.inf
        stable = False
    else:
        rel = abs(second.sup - first.sup) / max(second.sup, 1e-300)
        stable = rel < 0.02
    return {
        "sup": _encode(second.sup),
        "sup_coarse": _encode(first.sup),
        "relative_change": "inf" if math.isinf(rel) else rel,
        "stable": stable,
        "divergent": first.divergent or second.divergent,
        "resolutions": [resolution, resolution * factor],
    }
