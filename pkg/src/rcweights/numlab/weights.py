"""Evaluable weights on an interval: piecewise powers and their products.

The workhorse representation is a piecewise power weight: finitely many
pieces, each of the form  c * |x - x0|^a  with c > 0.  That family covers
plain power weights, piecewise constants, truncations like max(|x|, 1/2),
and is closed under powers and under products whose singular centers
agree piece by piece.  Each piece carries exact antiderivatives of w^p
and of ln w, so p-means of the whole corpus have closed forms; quadrature
exists as an independent cross-check and for products that fall outside
the closed family.

Local behaviour bookkeeping: every weight can report, for each potential
singular location, the power-law exponents it follows on the left and
right of that point.  That is what makes divergence detection analytic:
the integral of w^p across xs diverges exactly when a side exponent e
with e*p <= -1 touches the integration range.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


def _pow_antiderivative(t: float, q: float) -> float:
    """G with G'(t) = |t|^q away from 0: G(t) = sign(t) |t|^(q+1)/(q+1),
    with sign(t) ln|t| at q = -1 (G(0) = 0 where defined)."""
    sign = 1.0 if t > 0 else -1.0
    if q == -1.0:
        if t == 0.0:
            return -math.inf
        return sign * math.log(abs(t))
    if t == 0.0:
        return 0.0 if q > -1.0 else math.inf
    return sign * (abs(t) ** (q + 1.0) / (q + 1.0))


def _log_antiderivative(t: float) -> float:
    """H with H'(t) = ln|t|; H(0) = 0."""
    if t == 0.0:
        return 0.0
    return t * math.log(abs(t)) - t


def power_segment_integral(t0: float, t1: float, q: float) -> float:
    """integral of |t|^q over (t0, t1), math.inf when it diverges."""
    if t0 > t1:
        raise ValueError("empty segment")
    if q <= -1.0 and t0 <= 0.0 <= t1:
        return math.inf
    return _pow_antiderivative(t1, q) - _pow_antiderivative(t0, q)


@dataclass(frozen=True)
class Piece:
    coef: float
    expo: float
    center: float = 0.0

    def __post_init__(self) -> None:
        if self.coef <= 0:
            raise ValueError("piece coefficient must be positive")


class Weight:
    """Interface shared by all evaluable weights."""

    # subclasses that cannot report local power behaviour set this False,
    # which switches divergence detection to the growth heuristic
    analytic_divergence = True

    def value(self, x: float) -> float:
        raise NotImplementedError

    def values(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.value(x) for x in xs])

    def cut_points(self, lo: float, hi: float) -> list:
        """Structural points strictly inside (lo, hi): piece breaks and
        singular centers; quadrature splits here."""
        raise NotImplementedError

    def side_exponents(self, x: float) -> tuple:
        """(left, right) local power-law exponents at x (0 when regular)."""
        raise NotImplementedError

    def singular_candidates(self, lo: float, hi: float) -> list:
        """Locations in [lo, hi] with a nonzero side exponent."""
        raise NotImplementedError

    # exact closed forms; None when this weight has none
    def pow_integral(self, lo: float, hi: float, p: float) -> Optional[float]:
        return None

    def log_integral(self, lo: float, hi: float) -> Optional[float]:
        return None

    def abs_log_dev_integral(self, lo: float, hi: float, m: float) -> Optional[float]:
        return None

    def ess_range(self, lo: float, hi: float) -> Optional[tuple]:
        return None

    def pow_divergent(self, lo: float, hi: float, p: float) -> bool:
        """Analytic divergence test for the integral of w^p over (lo, hi)."""
        for xs in self.singular_candidates(lo, hi):
            left, right = self.side_exponents(xs)
            if xs > lo and left != 0.0 and left * p <= -1.0:
                return True
            if xs < hi and right != 0.0 and right * p <= -1.0:
                return True
        return False

    def __pow__(self, theta: float) -> "Weight":
        raise NotImplementedError

    def __mul__(self, other: "Weight") -> "Weight":
        return product(self, other)

    def describe(self) -> str:
        raise NotImplementedError


class PiecewisePower(Weight):
    def __init__(self, breaks: tuple, pieces: tuple):
        if len(pieces) != len(breaks) + 1:
            raise ValueError("need exactly one piece per gap")
        if any(breaks[i] >= breaks[i + 1] for i in range(len(breaks) - 1)):
            raise ValueError("breakpoints must increase")
        self.breaks = tuple(float(b) for b in breaks)
        self.pieces = tuple(pieces)

    # -- evaluation ----------------------------------------------------

    def _piece_at(self, x: float) -> Piece:
        return self.pieces[bisect.bisect_right(self.breaks, x)]

    def value(self, x: float) -> float:
        p = self._piece_at(x)
        if p.expo == 0.0:
            return p.coef
        return p.coef * abs(x - p.center) ** p.expo

    def values(self, xs: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breaks, xs, side="right")
        out = np.empty_like(xs, dtype=float)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if not mask.any():
                continue
            if piece.expo == 0.0:
                out[mask] = piece.coef
            else:
                out[mask] = piece.coef * np.abs(xs[mask] - piece.center) ** piece.expo
        return out

    # -- structure -------------------------------------------------------

    def _segments(self, lo: float, hi: float):
        """(a, b, piece) covering (lo, hi)."""
        edges = [lo] + [b for b in self.breaks if lo < b < hi] + [hi]
        for a, b in zip(edges, edges[1:]):
            yield a, b, self._piece_at(0.5 * (a + b))

    def cut_points(self, lo: float, hi: float) -> list:
        pts = {b for b in self.breaks if lo < b < hi}
        for a, b, piece in self._segments(lo, hi):
            if piece.expo != 0.0 and a < piece.center < b:
                pts.add(piece.center)
        return sorted(pts)

    def side_exponents(self, x: float) -> tuple:
        left_piece = self.pieces[bisect.bisect_left(self.breaks, x)]
        right_piece = self._piece_at(x)
        left = left_piece.expo if left_piece.center == x else 0.0
        right = right_piece.expo if right_piece.center == x else 0.0
        return left, right

    def singular_candidates(self, lo: float, hi: float) -> list:
        pts = set()
        for piece in self.pieces:
            if piece.expo != 0.0 and lo <= piece.center <= hi:
                pts.add(piece.center)
        return sorted(p for p in pts if self.side_exponents(p) != (0.0, 0.0))

    # -- exact integrals ---------------------------------------------------

    def pow_integral(self, lo: float, hi: float, p: float) -> float:
        total = 0.0
        for a, b, piece in self._segments(lo, hi):
            q = piece.expo * p
            seg = power_segment_integral(a - piece.center, b - piece.center, q)
            if math.isinf(seg):
                return math.inf
            total += piece.coef ** p * seg
        return total

    def log_integral(self, lo: float, hi: float) -> float:
        total = 0.0
        for a, b, piece in self._segments(lo, hi):
            total += (b - a) * math.log(piece.coef)
            if piece.expo != 0.0:
                total += piece.expo * (_log_antiderivative(b - piece.center)
                                       - _log_antiderivative(a - piece.center))
        return total

    def abs_log_dev_integral(self, lo: float, hi: float, m: float) -> float:
        """Exact integral of |ln w - m| over (lo, hi).

        Within a piece, ln w = ln c + e*ln|t| is monotone on either side of
        the center, so the level set {ln w = m} is at radius
        exp((m - ln c)/e) and the segment splits into sign-constant parts.
        """
        total = 0.0
        for a, b, piece in self._segments(lo, hi):
            cuts = {a, b}
            if piece.expo != 0.0:
                try:
                    rho = math.exp((m - math.log(piece.coef)) / piece.expo)
                except OverflowError:
                    rho = math.inf
                for x in (piece.center - rho, piece.center + rho, piece.center):
                    if a < x < b:
                        cuts.add(x)
            for u, v in zip(sorted(cuts), sorted(cuts)[1:]):
                part = (v - u) * (math.log(piece.coef) - m)
                if piece.expo != 0.0:
                    part += piece.expo * (_log_antiderivative(v - piece.center)
                                          - _log_antiderivative(u - piece.center))
                mid = self.value(0.5 * (u + v))
                sign = 1.0 if math.log(mid) >= m else -1.0
                total += sign * part
        return total

    def ess_range(self, lo: float, hi: float) -> tuple:
        """Exact essential (inf, sup) over (lo, hi): each piece is monotone
        away from its center, so extrema sit at segment ends or centers."""
        vals = []
        for a, b, piece in self._segments(lo, hi):
            for t in (a, b):
                d = abs(t - piece.center)
                if piece.expo == 0.0:
                    vals.append(piece.coef)
                elif d == 0.0:
                    vals.append(0.0 if piece.expo > 0 else math.inf)
                else:
                    vals.append(piece.coef * d ** piece.expo)
            if piece.expo != 0.0 and a < piece.center < b:
                vals.append(0.0 if piece.expo > 0 else math.inf)
        return min(vals), max(vals)

    # -- algebra ---------------------------------------------------------

    def __pow__(self, theta: float) -> "PiecewisePower":
        th = float(theta)
        if th == 0.0:
            raise ValueError("weight power with exponent zero")
        return PiecewisePower(self.breaks, tuple(
            Piece(p.coef ** th, p.expo * th, p.center) for p in self.pieces))

    def describe(self) -> str:
        if not self.breaks:
            p = self.pieces[0]
            return _piece_text(p)
        parts = [f"{_piece_text(p)} on {seg}" for p, seg in zip(
            self.pieces, _gap_texts(self.breaks))]
        return "; ".join(parts)


def _piece_text(p: Piece) -> str:
    centre = f"x-{p.center:g}" if p.center else "x"
    if p.expo == 0.0:
        return f"{p.coef:g}"
    coef = "" if p.coef == 1.0 else f"{p.coef:g}*"
    return f"{coef}|{centre}|^{p.expo:g}"


def _gap_texts(breaks: tuple) -> list:
    edges = ["-inf"] + [f"{b:g}" for b in breaks] + ["inf"]
    return [f"({a},{b})" for a, b in zip(edges, edges[1:])]


class ProductWeight(Weight):
    """Fallback product with no closed antiderivative (quadrature only)."""

    def __init__(self, factors: tuple):
        self.factors = tuple(factors)

    def value(self, x: float) -> float:
        out = 1.0
        for f in self.factors:
            out *= f.value(x)
        return out

    def values(self, xs: np.ndarray) -> np.ndarray:
        out = np.ones_like(xs, dtype=float)
        for f in self.factors:
            out = out * f.values(xs)
        return out

    def cut_points(self, lo: float, hi: float) -> list:
        pts = set()
        for f in self.factors:
            pts.update(f.cut_points(lo, hi))
        return sorted(pts)

    def side_exponents(self, x: float) -> tuple:
        left = sum(f.side_exponents(x)[0] for f in self.factors)
        right = sum(f.side_exponents(x)[1] for f in self.factors)
        return left, right

    def singular_candidates(self, lo: float, hi: float) -> list:
        pts = set()
        for f in self.factors:
            pts.update(f.singular_candidates(lo, hi))
        return sorted(p for p in pts if self.side_exponents(p) != (0.0, 0.0))

    def ess_range(self, lo: float, hi: float) -> Optional[tuple]:
        return None

    def __pow__(self, theta: float) -> "ProductWeight":
        return ProductWeight(tuple(f ** theta for f in self.factors))

    def describe(self) -> str:
        return " * ".join(f"({f.describe()})" for f in self.factors)


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------

def power_weight(a: float, center: float = 0.0) -> PiecewisePower:
    """|x - center|^a."""
    return PiecewisePower((), (Piece(1.0, float(a), float(center)),))


def constant_weight(c: float) -> PiecewisePower:
    return PiecewisePower((), (Piece(float(c), 0.0, 0.0),))


def piecewise_constant(breaks, values) -> PiecewisePower:
    return PiecewisePower(tuple(float(b) for b in breaks),
                          tuple(Piece(float(v), 0.0, 0.0) for v in values))


def max_power_const(a: float, floor: float, center: float = 0.0) -> PiecewisePower:
    """max(|x - center|^a, floor) for a > 0: constant near the center."""
    if a <= 0 or floor <= 0:
        raise ValueError("max_power_const needs a > 0 and floor > 0")
    rho = floor ** (1.0 / a)
    return PiecewisePower(
        (center - rho, center + rho),
        (Piece(1.0, a, center), Piece(floor, 0.0, 0.0), Piece(1.0, a, center)))


def product(f: Weight, g: Weight) -> Weight:
    """Product of weights, kept in the closed piecewise family if the
    singular centers line up piece by piece."""
    if isinstance(f, PiecewisePower) and isinstance(g, PiecewisePower):
        merged = _merge_piecewise(f, g)
        if merged is not None:
            return merged
    factors = []
    for w in (f, g):
        factors.extend(w.factors if isinstance(w, ProductWeight) else [w])
    return ProductWeight(tuple(factors))


def _merge_piecewise(f: PiecewisePower, g: PiecewisePower) -> Optional[PiecewisePower]:
    breaks = sorted(set(f.breaks) | set(g.breaks))
    pieces = []
    probes = []
    if breaks:
        probes.append(breaks[0] - 1.0)
        probes.extend(0.5 * (a + b) for a, b in zip(breaks, breaks[1:]))
        probes.append(breaks[-1] + 1.0)
    else:
        probes.append(0.0)
    for x in probes:
        pf, pg = f._piece_at(x), g._piece_at(x)
        coef = pf.coef * pg.coef
        if pf.expo == 0.0:
            pieces.append(Piece(coef, pg.expo, pg.center))
        elif pg.expo == 0.0:
            pieces.append(Piece(coef, pf.expo, pf.center))
        elif pf.center == pg.center:
            pieces.append(Piece(coef, pf.expo + pg.expo, pf.center))
        else:
            return None
    return PiecewisePower(tuple(breaks), tuple(pieces))
