from fractions import Fraction as F

import pytest

from rcweights.exponents import (
    Exp, ExponentError, ExponentPair, NEG_INF, POS_INF, ap_exponent,
    ap_index, holder_conjugate, interpolate_exponents, scale_pair,
)


def pair(lo, hi):
    return ExponentPair.of(lo, hi)


class TestExp:
    def test_total_order(self):
        chain = [NEG_INF, Exp.finite(-3), Exp.finite(0), Exp.finite(F(1, 2)),
                 Exp.finite(2), POS_INF]
        for a, b in zip(chain, chain[1:]):
            assert a < b and b > a and a <= b

    def test_parse_and_str(self):
        assert Exp.parse("inf") == POS_INF
        assert Exp.parse("-inf") == NEG_INF
        assert Exp.parse("1.5") == Exp.finite(F(3, 2))
        assert Exp.parse("-1/2") == Exp.finite(F(-1, 2))
        assert str(Exp.finite(F(3, 2))) == "3/2"
        assert str(POS_INF) == "inf"
        with pytest.raises(ExponentError):
            Exp.parse("abc")

    def test_infinities_carry_no_finite_part(self):
        assert Exp(1, F(7)) == POS_INF

    def test_float(self):
        assert float(NEG_INF) == float("-inf")
        assert float(Exp.finite(F(1, 4))) == 0.25


class TestPair:
    def test_requires_strict_order(self):
        with pytest.raises(ExponentError):
            pair(1, 1)
        with pytest.raises(ExponentError):
            pair(2, 1)

    def test_contains(self):
        assert pair(-1, 2).contains(pair(0, 1))
        assert pair(-1, 2).contains(pair(-1, 2))
        assert not pair(0, 1).contains(pair(-1, 2))


class TestScalePair:
    def test_positive_finite(self):
        assert scale_pair(pair(1, 2), 2) == pair(F(1, 2), 1)

    def test_negative_with_infinity(self):
        # flips the pair and sends -inf to +inf
        assert scale_pair(pair("-inf", 1), -1) == pair(-1, "inf")

    def test_conjugate_power(self):
        assert scale_pair(pair("-0.5", 1), F(-1, 2)) == pair(-2, 1)

    def test_zero_endpoint_is_fixed(self):
        assert scale_pair(pair(0, 1), 5) == pair(0, F(1, 5))

    def test_round_trip(self):
        p = pair(F(-1, 3), F(5, 2))
        for theta in (F(2), F(-1), F(-3, 7)):
            assert scale_pair(scale_pair(p, theta), 1 / theta) == p

    def test_rejects_zero(self):
        with pytest.raises(ExponentError):
            scale_pair(pair(0, 1), 0)


class TestApExponent:
    def test_values(self):
        assert ap_exponent(3) == pair(F(-1, 2), 1)
        assert ap_exponent(1) == pair("-inf", 1)
        assert ap_exponent("inf") == pair(0, 1)

    def test_rejects_small_p(self):
        with pytest.raises(ExponentError):
            ap_exponent(F(1, 2))

    def test_left_endpoint_monotone(self):
        # 1 < p < q < inf gives 1/(1-p) < 1/(1-q)
        ps = [F(11, 10), F(3, 2), 2, 3, 10, 100]
        los = [ap_exponent(p).lo for p in ps]
        assert all(a < b for a, b in zip(los, los[1:]))

    def test_index_inverse(self):
        for p in (1, F(3, 2), 2, 7, "inf"):
            assert ap_index(ap_exponent(p).lo) == Exp.parse(str(p))


class TestConjugate:
    def test_values(self):
        assert holder_conjugate(2) == Exp.finite(2)
        assert holder_conjugate(3) == Exp.finite(F(3, 2))
        assert holder_conjugate(F(5, 4)) == Exp.finite(5)

    def test_involution(self):
        for p in (F(11, 10), F(3, 2), 2, 3, F(17, 5)):
            assert holder_conjugate(holder_conjugate(p)) == Exp.finite(p)

    def test_rejects_boundary(self):
        with pytest.raises(ExponentError):
            holder_conjugate(1)
        with pytest.raises(ExponentError):
            holder_conjugate("inf")


class TestInterpolate:
    def test_finite_case(self):
        # 1/r = (1/2)(-1/2) + (1/2)(-1) = -3/4; 1/s = 1/2 + 1/4 = 3/4
        assert interpolate_exponents(-2, -1, 1, 2, F(1, 2)) == pair(F(-4, 3), F(4, 3))

    def test_equal_endpoints_fixed(self):
        assert interpolate_exponents(-1, -1, 1, 1, F(3, 10)) == pair(-1, 1)

    def test_infinite_outer(self):
        assert interpolate_exponents("-inf", -1, 1, "inf", F(1, 2)) == pair(-2, 2)

    def test_endpoints(self):
        r1, r2, s1, s2 = F(-3), F(-2), F(1), F(4)
        assert interpolate_exponents(r1, r2, s1, s2, 0) == pair(r2, s2)
        assert interpolate_exponents(r1, r2, s1, s2, 1) == pair(r1, s1)

    def test_preconditions(self):
        with pytest.raises(ExponentError):
            interpolate_exponents(-1, -2, 1, 2, F(1, 2))   # r1 > r2
        with pytest.raises(ExponentError):
            interpolate_exponents(-2, -1, 2, 1, F(1, 2))   # s1 > s2
        with pytest.raises(ExponentError):
            interpolate_exponents(-2, 1, 1, 2, F(1, 2))    # r2 not negative
        with pytest.raises(ExponentError):
            interpolate_exponents(-2, -1, 1, 2, F(3, 2))   # theta outside [0,1]
