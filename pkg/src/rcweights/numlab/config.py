"""Config-file loading for estimation jobs (JSON, everything explicit).

Example::

    {
      "domain": [-1.0, 1.0],
      "weight": {"kind": "power", "a": 1.0, "center": 0.0},
      "class": "A(3)",
      "mode": "strong",
      "family": {"kind": "centered", "n_radii": 20, "min_radius_ratio": 0.001},
      "resolution": 10000,
      "method": "auto"
    }

``class`` may instead be {"r": "-1/2", "s": "1"}.  Weight kinds: power,
constant, piecewise_constant, max_power_const, power_of, product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..exponents import Exp, ExponentError
from ..facts import parse_class_token
from .balls import BallFamily, Domain
from .estimate import STRONG_MODE, WEAK_MODE
from .means import AUTO, DEFAULT_RESOLUTION
from .weights import (
    Weight, constant_weight, max_power_const, piecewise_constant, power_weight,
)


class ConfigError(ValueError):
    pass


def build_weight(spec) -> Weight:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"weight spec must be an object with a 'kind': {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "power":
            return power_weight(float(spec["a"]), float(spec.get("center", 0.0)))
        if kind == "constant":
            return constant_weight(float(spec["c"]))
        if kind == "piecewise_constant":
            return piecewise_constant(spec["breaks"], spec["values"])
        if kind == "max_power_const":
            return max_power_const(float(spec["a"]), float(spec["floor"]),
                                   float(spec.get("center", 0.0)))
        if kind == "power_of":
            return build_weight(spec["base"]) ** float(spec["theta"])
        if kind == "product":
            factors = [build_weight(f) for f in spec["factors"]]
            if not factors:
                raise ConfigError("empty product weight")
            out = factors[0]
            for f in factors[1:]:
                out = out * f
            return out
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad weight spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown weight kind {kind!r}")


def build_family(spec, domain: Domain) -> BallFamily:
    spec = spec or {}
    kind = spec.get("kind", "centered")
    try:
        if kind == "centered":
            return BallFamily.centered(
                domain,
                n_radii=int(spec.get("n_radii", 20)),
                min_radius_ratio=float(spec.get("min_radius_ratio", 1e-3)),
                center=spec.get("center"))
        if kind == "grid":
            return BallFamily.grid(
                domain,
                n_centers=int(spec.get("n_centers", 50)),
                n_radii=int(spec.get("n_radii", 20)),
                min_radius_ratio=float(spec.get("min_radius_ratio", 1e-3)))
    except ValueError as exc:
        raise ConfigError(f"bad family spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown family kind {kind!r}")


@dataclass
class EstimateJob:
    domain: Domain
    weight: Weight
    r: Exp
    s: Exp
    mode: str
    family: BallFamily
    resolution: int
    method: str


def load_job(data) -> EstimateJob:
    """Build an estimation job from a parsed config object."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    try:
        a, b = data["domain"]
        domain = Domain(float(a), float(b))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad or missing 'domain': {exc}") from exc
    weight = build_weight(data.get("weight"))
    if "class" in data:
        cls = data["class"]
        if isinstance(cls, str):
            try:
                pair, strength = parse_class_token(cls)
            except ExponentError as exc:
                raise ConfigError(str(exc)) from exc
            mode = WEAK_MODE if strength == "weak" else STRONG_MODE
        elif isinstance(cls, dict) and {"r", "s"} <= set(cls):
            try:
                pair_lo, pair_hi = Exp.parse(str(cls["r"])), Exp.parse(str(cls["s"]))
            except ExponentError as exc:
                raise ConfigError(str(exc)) from exc
            if not pair_lo < pair_hi:
                raise ConfigError(f"need r < s, got {cls}")
            from ..exponents import ExponentPair
            pair = ExponentPair(pair_lo, pair_hi)
            mode = STRONG_MODE
        else:
            raise ConfigError(f"bad 'class' entry: {cls!r}")
    else:
        raise ConfigError("config needs a 'class' entry")
    mode = data.get("mode", mode)
    if mode not in (STRONG_MODE, WEAK_MODE):
        raise ConfigError(f"mode must be 'strong' or 'weak', got {mode!r}")
    family = build_family(data.get("family"), domain)
    resolution = int(data.get("resolution", DEFAULT_RESOLUTION))
    method = data.get("method", AUTO)
    if method not in ("auto", "exact", "quadrature"):
        raise ConfigError(f"method must be auto/exact/quadrature, got {method!r}")
    return EstimateJob(domain, weight, pair.lo, pair.hi, mode, family,
                       resolution, method)


def load_job_file(path: str) -> EstimateJob:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return load_job(data)
