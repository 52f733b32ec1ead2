"""Packaged product-of-power-weights experiments.

Both experiments probe the same question: when does a product of two
weights inherit the reverse class cut out by intersecting the factors'
arrows?  The answer is only when the factors touch opposite infinities;
these runs exhibit the failure numerically in the two ways it can occur
(neither factor touching an infinity, and only one touching one).
Factors are expected to produce stable finite estimates, the product a
divergent sentinel.
"""

from __future__ import annotations

from .balls import BallFamily, Domain
from .estimate import estimate_constant, stability_probe
from .weights import constant_weight, power_weight
from ..facts import parse_class

EXPERIMENT_NAMES = ("ex8.4", "ex8.5")

_DEF_RESOLUTION = 4000


def _leg(role, weight, token, family, resolution):
    pair = parse_class(token)
    probe = stability_probe(weight, family, pair.lo, pair.hi, resolution)
    return {
        "role": role,
        "weight": weight.describe(),
        "class": token,
        "pair": [str(pair.lo), str(pair.hi)],
        **probe,
    }


def _family(domain: Domain) -> BallFamily:
    return BallFamily.grid(domain, n_centers=16, n_radii=6, min_radius_ratio=0.01)


def run_experiment(name: str, resolution: int = _DEF_RESOLUTION,
                   eps0: float = 0.01, eps1: float = 0.01) -> dict:
    """Run one packaged experiment and return its machine-readable report."""
    if name == "ex8.4":
        return _run_interior(resolution)
    if name == "ex8.5":
        return _run_one_sided(resolution, eps0, eps1)
    raise ValueError(f"unknown experiment {name!r}; know {EXPERIMENT_NAMES}")


def _run_interior(resolution: int) -> dict:
    """Neither factor's arrow touches an infinity.

    u = |x| sits in A(3), v = |x|^3 in A(5); the intersection of the two
    arrows is the A(5) arrow, but the product |x|^4 fails A(5): its
    (-1/4)-mean diverges on balls around the origin.
    """
    domain = Domain(-1.0, 1.0)
    family = _family(domain)
    u = power_weight(1.0)
    v = power_weight(3.0)
    uv = u * v
    legs = [
        _leg("factor", u, "A(3)", family, resolution),
        _leg("factor", v, "A(5)", family, resolution),
        _leg("product", uv, "A(5)", family, resolution),
    ]
    control_pair = parse_class("A(3)")
    control = estimate_constant(u * constant_weight(1.0), family,
                                control_pair.lo, control_pair.hi, resolution)
    base = estimate_constant(u, family, control_pair.lo, control_pair.hi,
                             resolution)
    claims = [
        {"claim": "factor |x| has a stable A(3) estimate",
         "ok": bool(legs[0]["stable"] and not legs[0]["divergent"])},
        {"claim": "factor |x|^3 has a stable A(5) estimate",
         "ok": bool(legs[1]["stable"] and not legs[1]["divergent"])},
        {"claim": "product |x|^4 diverges at A(5): the intersected class fails",
         "ok": bool(legs[2]["divergent"])},
        {"claim": "control: multiplying by the unit weight changes nothing",
         "ok": bool(control.sup == base.sup)},
    ]
    return _report("ex8.4", domain, family, resolution, legs, claims, {
        "intersection": "A(5)  (the narrower of the two arrows)",
    })


def _run_one_sided(resolution: int, eps0: float, eps1: float) -> dict:
    """Only one factor's arrow touches an infinity.

    u = |x|^(1-eps0) spans (-1, inf) -- witnessed by u^(-1) in A(1) -- and
    v = |x|^(eps0+eps1/2) sits in A(2).  The intersected arrow is A(2),
    yet the product |x|^(1+eps1/2) fails A(2).
    """
    if not (0 < eps0 + eps1 < 1):
        raise ValueError("need 0 < eps0 + eps1 << 1")
    domain = Domain(-1.0, 1.0)
    family = _family(domain)
    u = power_weight(1.0 - eps0)
    u_inv = u ** -1.0
    v = power_weight(eps0 + eps1 / 2.0)
    uv = u * v
    legs = [
        _leg("factor-witness", u_inv, "A(1)", family, resolution),
        _leg("factor", v, "A(2)", family, resolution),
        _leg("product", uv, "A(2)", family, resolution),
    ]
    claims = [
        {"claim": "u^(-1) has a stable A(1) estimate, so u spans (-1, inf)",
         "ok": bool(legs[0]["stable"] and not legs[0]["divergent"])},
        {"claim": "factor v has a stable A(2) estimate",
         "ok": bool(legs[1]["stable"] and not legs[1]["divergent"])},
        {"claim": "product diverges at A(2): one infinity is not enough",
         "ok": bool(legs[2]["divergent"])},
    ]
    return _report("ex8.5", domain, family, resolution, legs, claims, {
        "eps0": eps0, "eps1": eps1,
        "intersection": "A(2)  (the factor arrow not touching an infinity)",
    })


def _report(name, domain, family, resolution, legs, claims, params) -> dict:
    return {
        "schema": "rcweights.experiment/1",
        "name": name,
        "domain": [domain.a, domain.b],
        "family": family.meta_dict(),
        "resolution": resolution,
        "legs": legs,
        "claims": claims,
        "all_claims_hold": all(c["ok"] for c in claims),
        "params": params,
    }
