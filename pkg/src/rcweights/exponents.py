"""Exact arithmetic on the extended real line of integrability exponents.

Every arrow in the calculus lives on the axis [-inf, +inf].  Endpoints are
kept as exact rationals (``fractions.Fraction``) because rule applicability
hinges on exact endpoint equality: a concatenation fires only when one
arrow ends precisely where the next begins, and floating point would rot
those tests.  Floats appear only at the rendering / numerics boundary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ExponentError(ValueError):
    """Raised for malformed or out-of-range exponent operations."""


_NEG, _FIN, _POS = -1, 0, 1

_NUM_RE = re.compile(r"^[+-]?(\d+(\.\d+)?|\.\d+|\d+/\d+)$")


@dataclass(frozen=True)
class Exp:
    """A point of the extended real line: -inf, an exact rational, or +inf."""

    inf: int = _FIN          # -1 neg. infinity, 0 finite, +1 pos. infinity
    value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.inf not in (_NEG, _FIN, _POS):
            raise ExponentError(f"bad infinity marker {self.inf!r}")
        if self.inf != _FIN and self.value != 0:
            object.__setattr__(self, "value", Fraction(0))
        if self.inf == _FIN and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    # -- constructors ------------------------------------------------

    @staticmethod
    def finite(x) -> "Exp":
        return Exp(_FIN, Fraction(x))

    @staticmethod
    def parse(token: str) -> "Exp":
        t = token.strip().lower()
        if t in ("inf", "+inf", "oo", "+oo"):
            return POS_INF
        if t in ("-inf", "-oo"):
            return NEG_INF
        if not _NUM_RE.match(t):
            raise ExponentError(f"cannot parse exponent {token!r}")
        return Exp.finite(Fraction(t))

    # -- predicates ---------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.inf == _FIN

    @property
    def is_pos_inf(self) -> bool:
        return self.inf == _POS

    @property
    def is_neg_inf(self) -> bool:
        return self.inf == _NEG

    # -- order --------------------------------------------------------

    def _key(self):
        return (self.inf, self.value)

    def __lt__(self, other: "Exp") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Exp") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Exp") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Exp") -> bool:
        return self._key() >= other._key()

    # -- arithmetic helpers --------------------------------------------

    def __neg__(self) -> "Exp":
        if self.inf:
            return Exp(-self.inf)
        return Exp.finite(-self.value)

    def div(self, theta: Fraction) -> "Exp":
        """self / theta on the extended line; inf/theta keeps the axis end."""
        if theta == 0:
            raise ExponentError("division of an exponent by zero")
        if self.inf:
            return Exp(self.inf if theta > 0 else -self.inf)
        return Exp.finite(self.value / theta)

    def inverse_or_zero(self) -> Fraction:
        """1/self with the convention 1/(+-inf) = 0 (harmonic combinations)."""
        if self.inf:
            return Fraction(0)
        if self.value == 0:
            raise ExponentError("reciprocal of the zero exponent")
        return 1 / self.value

    def __float__(self) -> float:
        if self.inf == _POS:
            return float("inf")
        if self.inf == _NEG:
            return float("-inf")
        return float(self.value)

    def __str__(self) -> str:
        if self.inf == _POS:
            return "inf"
        if self.inf == _NEG:
            return "-inf"
        return str(self.value)

    def __repr__(self) -> str:
        return f"Exp({self})"


NEG_INF = Exp(_NEG)
POS_INF = Exp(_POS)
ZERO = Exp.finite(0)
ONE = Exp.finite(1)


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, finite Exp or numeric strings to Fraction."""
    if isinstance(x, Exp):
        if not x.is_finite:
            raise ExponentError(f"{x} is not finite")
        return x.value
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ExponentError(f"not an exact rational: {x!r}")


def as_exp(x) -> Exp:
    if isinstance(x, Exp):
        return x
    if isinstance(x, str):
        return Exp.parse(x)
    return Exp.finite(Fraction(x))


@dataclass(frozen=True)
class ExponentPair:
    """An ordered pair lo < hi of extended-real exponents (an arrow's feet)."""

    lo: Exp
    hi: Exp

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ExponentError(f"need lo < hi, got ({self.lo}, {self.hi})")

    @staticmethod
    def of(lo, hi) -> "ExponentPair":
        return ExponentPair(as_exp(lo), as_exp(hi))

    def contains(self, other: "ExponentPair") -> bool:
        """True when `other` is nested inside self (shrink target test)."""
        return self.lo <= other.lo and other.hi <= self.hi

    def crosses_zero(self) -> bool:
        return self.lo < ZERO < self.hi

    def __str__(self) -> str:
        return f"({self.lo},{self.hi})"

    def __repr__(self) -> str:
        return f"ExponentPair{self}"


def scale_pair(pair: ExponentPair, theta) -> ExponentPair:
    """Transport an exponent pair under w -> w^theta.

    For theta > 0 the pair maps to (lo/theta, hi/theta); for theta < 0 the
    endpoints swap to (hi/theta, lo/theta) so the result is ordered again.
    """
    th = as_fraction(theta)
    if th == 0:
        raise ExponentError("scaling by zero is undefined")
    if th > 0:
        return ExponentPair(pair.lo.div(th), pair.hi.div(th))
    return ExponentPair(pair.hi.div(th), pair.lo.div(th))


def ap_exponent(p) -> ExponentPair:
    """Arrow of the Muckenhoupt class with index p in [1, inf].

    A_1 = (-inf, 1); A_p = (1/(1-p), 1) for finite p > 1; A_inf = (0, 1).
    """
    pe = as_exp(p)
    if pe.is_pos_inf:
        return ExponentPair(ZERO, ONE)
    if pe.is_neg_inf or pe.value < 1:
        raise ExponentError(f"A(p) requires p >= 1, got {pe}")
    if pe.value == 1:
        return ExponentPair(NEG_INF, ONE)
    return ExponentPair(Exp.finite(1 / (1 - pe.value)), ONE)


def ap_index(lo: Exp) -> Exp:
    """Inverse of ap_exponent on the left endpoint: lo -> p."""
    if lo.is_neg_inf:
        return ONE
    if not lo.is_finite or lo.value > 0:
        raise ExponentError(f"{lo} is not an A-class left endpoint")
    if lo.value == 0:
        return POS_INF
    return Exp.finite(1 - 1 / lo.value)


def holder_conjugate(p) -> Exp:
    """p' with 1/p + 1/p' = 1, for finite 1 < p < inf."""
    pe = as_exp(p)
    if not pe.is_finite or pe.value <= 1:
        raise ExponentError(f"conjugate needs 1 < p < inf, got {pe}")
    return Exp.finite(pe.value / (pe.value - 1))


def interpolate_exponents(r1, r2, s1, s2, theta) -> ExponentPair:
    """Harmonic combination of two zero-crossing pairs.

    Requires r1 <= r2 < 0 < s1 <= s2 and theta in [0, 1]; infinite outer
    endpoints enter through 1/(+-inf) = 0.  Returns (r_t, s_t) with
    1/r_t = theta/r1 + (1-theta)/r2 and likewise on the right.
    """
    r1, r2, s1, s2 = as_exp(r1), as_exp(r2), as_exp(s1), as_exp(s2)
    th = as_fraction(theta)
    if not (0 <= th <= 1):
        raise ExponentError(f"interpolation parameter {th} outside [0,1]")
    if not (r1 <= r2 < ZERO):
        raise ExponentError(f"need r1 <= r2 < 0, got r1={r1}, r2={r2}")
    if not (ZERO < s1 <= s2):
        raise ExponentError(f"need 0 < s1 <= s2, got s1={s1}, s2={s2}")
    inv_r = th * r1.inverse_or_zero() + (1 - th) * r2.inverse_or_zero()
    inv_s = th * s1.inverse_or_zero() + (1 - th) * s2.inverse_or_zero()
    lo = NEG_INF if inv_r == 0 else Exp.finite(1 / inv_r)
    hi = POS_INF if inv_s == 0 else Exp.finite(1 / inv_s)
    return ExponentPair(lo, hi)
