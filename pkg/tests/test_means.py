"""p-mean values against independent oracles.

The library prefers closed-form antiderivatives; these tests cross-check
them with hand-derived exact values (frozen below) and with a naive
uniform Riemann sum implemented here, independent of the library's
graded quadrature.
"""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from rcweights.numlab import (
    Ball, Domain, constant_weight, log_oscillation, log_oscillation_ball,
    max_power_const, p_mean, piecewise_constant, power_weight,
    reversal_ratio, weak_reversal_ratio, BallFamily,
)
from rcweights.numlab.weights import ProductWeight

X_ON_02 = power_weight(1.0)     # equals x on the ball (0, 2)
B02 = Ball(1.0, 1.0)
DOM = Domain(-2.0, 4.0)


def riemann_pmean(weight, ball, p, n=400_000):
    """Independent oracle: plain uniform midpoint sum, no grading."""
    xs = np.linspace(ball.lo, ball.hi, n, endpoint=False) + (ball.length / n) / 2
    vals = weight.values(xs)
    if p == 0:
        return math.exp(np.mean(np.log(vals)))
    return float(np.mean(vals ** p) ** (1.0 / p))


class TestPMeanOracleValues:
    # exact values for w(x) = x on (0, 2):
    #   1-mean: (1/2) int x = 1
    #   2-mean: sqrt((1/2) int x^2) = sqrt(4/3)
    #   0-mean: exp((1/2) int ln x) = exp(ln 2 - 1) = 2/e
    CASES = [(1, 1.0), (2, math.sqrt(4.0 / 3.0)), (0, 2.0 / math.e)]

    @pytest.mark.parametrize("p,want", CASES)
    def test_exact_path(self, p, want):
        got = p_mean(X_ON_02, B02, p, domain=DOM)
        assert abs(got - want) < 1e-9

    @pytest.mark.parametrize("p,want", CASES)
    def test_quadrature_path(self, p, want):
        got = p_mean(X_ON_02, B02, p, resolution=10_000, method="quadrature")
        assert abs(got - want) < 1e-4

    @pytest.mark.parametrize("p", [1, 2, 0, -0.5, 3.5])
    def test_riemann_cross_check(self, p):
        # the naive oracle converges like sqrt(h) near the singular
        # endpoint for negative p, hence the looser tolerance
        got = p_mean(X_ON_02, B02, p)
        assert abs(got - riemann_pmean(X_ON_02, B02, p)) < 2e-3

    def test_constant_weight_every_p(self):
        c = constant_weight(3.0)
        for p in (-math.inf, -2, -1, 0, 0.5, 1, 7, math.inf):
            assert p_mean(c, B02, p) == pytest.approx(3.0, abs=1e-12)

    def test_inf_means_are_extrema(self):
        assert p_mean(X_ON_02, B02, math.inf) == pytest.approx(2.0)
        assert p_mean(X_ON_02, B02, -math.inf) == pytest.approx(0.0)


class TestSentinels:
    def test_divergent_negative_mean_is_zero(self):
        # int |x|^-1 diverges across the origin
        ball = Ball(0.0, 0.25)
        assert p_mean(power_weight(1.0), ball, -1) == 0.0

    def test_divergent_positive_mean_is_inf(self):
        ball = Ball(0.0, 0.25)
        assert p_mean(power_weight(-2.0), ball, 1) == math.inf

    def test_boundary_singularity_counts(self):
        # singular point on the closure of the ball
        ball = Ball(0.25, 0.25)
        assert p_mean(power_weight(1.0), ball, -1) == 0.0

    def test_ball_clear_of_singularity_is_finite(self):
        ball = Ball(1.0, 0.25)
        got = p_mean(power_weight(1.0), ball, -1)
        assert 0 < got < math.inf

    def test_admissibility_enforced(self):
        with pytest.raises(ValueError):
            p_mean(X_ON_02, Ball(0.0, 2.0), 1, domain=Domain(-1.0, 1.0))

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            p_mean(X_ON_02, B02, 1, resolution=1)


class TestReversalRatio:
    def test_closed_form_two(self):
        # |x| on (-R, R): 1-mean R/2, (-1/2)-mean R/4, ratio exactly 2
        for R in (0.1, 0.25, 0.5):
            got = reversal_ratio(power_weight(1.0), Ball(0.0, R), F(-1, 2), 1)
            assert got == pytest.approx(2.0, abs=1e-12)

    def test_constant_weight_is_one(self):
        got = reversal_ratio(constant_weight(5.0), B02, -1, 1)
        assert got == pytest.approx(1.0)

    def test_divergence_sentinel(self):
        # |x|^4 against the index-5 pair: the (-1/4)-mean integrand is |x|^-1
        got = reversal_ratio(power_weight(4.0), Ball(0.0, 0.5), F(-1, 4), 1)
        assert got == math.inf

    def test_order_required(self):
        with pytest.raises(ValueError):
            reversal_ratio(X_ON_02, B02, 1, 1)


class TestWeakRatio:
    def test_constant_weight_value(self):
        # unit weight: the doubled-ball mean with single-ball normalizer
        # is 2^(1/r), so the ratio is 2^(-1/r)
        c = constant_weight(1.0)
        for r, s in [(1, 2), (2, 3), (-1, 1)]:
            got = weak_reversal_ratio(c, Ball(0.0, 0.1), r, s,
                                      domain=Domain(-1.0, 1.0))
            assert got == pytest.approx(2.0 ** (-1.0 / r), abs=1e-12)

    def test_weak_below_scaled_strong(self):
        # for r > 0 the doubled-ball mean dominates, so the weak ratio
        # sits below 2^(1/r) times the strong one
        w = power_weight(1.0)
        ball = Ball(0.1, 0.2)
        strong = reversal_ratio(w, ball, 1, 2)
        weak = weak_reversal_ratio(w, ball, 1, 2, domain=Domain(-1.0, 1.0))
        assert weak <= 2.0 * strong + 1e-12

    def test_stable_under_refinement(self):
        w = power_weight(1.0)
        ball = Ball(0.0, 0.2)
        vals = [weak_reversal_ratio(w, ball, 1, 2, resolution=res,
                                    method="quadrature")
                for res in (2000, 4000, 8000)]
        assert abs(vals[-1] - vals[-2]) < 1e-4
        exact = weak_reversal_ratio(w, ball, 1, 2)
        assert vals[-1] == pytest.approx(exact, rel=1e-5)

    def test_zero_lower_exponent_rejected(self):
        with pytest.raises(ValueError):
            weak_reversal_ratio(constant_weight(1.0), Ball(0.0, 0.1), 0, 1)


class TestProductsAndPieces:
    def test_same_center_product_stays_exact(self):
        w = power_weight(1.0) * power_weight(3.0)
        assert w.pow_integral(0.5, 1.0, 1.0) is not None
        got = p_mean(w, Ball(1.0, 0.25), 1, domain=DOM)
        want = p_mean(power_weight(4.0), Ball(1.0, 0.25), 1)
        assert got == pytest.approx(want, rel=1e-12)

    def test_distinct_center_product_quadrature(self):
        w = power_weight(1.0, center=0.0) * power_weight(1.0, center=0.5)
        assert isinstance(w, ProductWeight)
        ball = Ball(0.25, 0.1)
        got = p_mean(w, ball, 1, resolution=20_000)
        assert got == pytest.approx(riemann_pmean(w, ball, 1), rel=1e-5)

    def test_product_divergence_sums_side_exponents(self):
        # |x| * |x| behaves like |x|^2 at 0: p = -1/2 integrable, -1 not
        w = ProductWeight((power_weight(1.0), power_weight(1.0)))
        ball = Ball(0.0, 0.5)
        assert not w.pow_divergent(ball.lo, ball.hi, -0.4)
        assert w.pow_divergent(ball.lo, ball.hi, -0.5)

    def test_piecewise_constant_means(self):
        w = piecewise_constant([0.0], [1.0, 3.0])
        ball = Ball(0.0, 0.5)
        assert p_mean(w, ball, 1) == pytest.approx(2.0)
        assert p_mean(w, ball, math.inf) == pytest.approx(3.0)
        assert p_mean(w, ball, -math.inf) == pytest.approx(1.0)

    def test_truncated_power(self):
        w = max_power_const(1.0, 0.5)
        assert w.value(0.1) == 0.5
        assert w.value(0.75) == pytest.approx(0.75)
        assert p_mean(w, Ball(0.0, 0.25), -math.inf) == 0.5


class TestHolderMonotonicitySpot:
    WEIGHTS = [power_weight(1.0), power_weight(-0.5), constant_weight(2.0),
               max_power_const(2.0, 0.25), piecewise_constant([0.1], [0.5, 2.0])]
    PS = [-math.inf, -2, -1, -0.25, 0, 0.5, 1, 2, math.inf]

    @pytest.mark.parametrize("method", ["auto", "quadrature"])
    def test_chain(self, method):
        ball = Ball(0.2, 0.3)
        for w in self.WEIGHTS:
            vals = [p_mean(w, ball, p, resolution=500, method=method)
                    for p in self.PS]
            for a, b in zip(vals, vals[1:]):
                if math.isinf(a) or math.isinf(b) or a == 0.0:
                    continue
                assert a <= b * (1 + 1e-10)


class TestScalingIdentitySpot:
    def test_exact_and_quadrature(self):
        w = power_weight(1.0)
        ball = Ball(0.3, 0.2)
        for method in ("auto", "quadrature"):
            for theta, p in [(2.0, 1.0), (0.5, -1.0), (-1.0, 2.0), (3.0, 0.5)]:
                lhs = p_mean(w ** theta, ball, p, resolution=800, method=method)
                rhs = p_mean(w, ball, theta * p, resolution=800,
                             method=method) ** theta
                assert lhs == pytest.approx(rhs, rel=1e-10)


class TestContinuityAtZero:
    @pytest.mark.parametrize("weight,ball", [
        (power_weight(1.0), Ball(1.0, 0.5)),
        (max_power_const(1.0, 0.5), Ball(0.0, 0.4)),
        (constant_weight(2.5), Ball(0.0, 0.3)),
    ])
    def test_two_sided(self, weight, ball):
        mid = p_mean(weight, ball, 0)
        for k in range(3, 7):
            p = 10.0 ** -k
            for signed in (p, -p):
                got = p_mean(weight, ball, signed)
                assert abs(got - mid) <= 10.0 * p


class TestOscillation:
    FAM = BallFamily.centered(Domain(-1.0, 1.0), n_radii=10)

    def test_constant_weight_all_zero(self):
        c = constant_weight(4.0)
        for kind in ("BMO", "BLO", "BUO"):
            assert log_oscillation(c, self.FAM, kind) == pytest.approx(0.0, abs=1e-12)

    def test_bmo_of_power_weight(self):
        # mean deviation of ln|x| over (-R, R) is 2/e independent of R
        got = log_oscillation(power_weight(1.0), self.FAM, "BMO")
        assert got == pytest.approx(2.0 / math.e, abs=1e-9)

    def test_bmo_quadrature_agrees(self):
        ball = Ball(0.0, 0.25)
        exact = log_oscillation_ball(power_weight(1.0), ball, "BMO")
        quad = log_oscillation_ball(power_weight(1.0), ball, "BMO",
                                    resolution=20_000, method="quadrature")
        assert quad == pytest.approx(exact, abs=1e-4)

    def test_blo_sentinel_for_vanishing_weight(self):
        assert log_oscillation(power_weight(1.0), self.FAM, "BLO") == math.inf

    def test_buo_sentinel_for_blowup(self):
        assert log_oscillation(power_weight(-1.0), self.FAM, "BUO") == math.inf

    def test_truncated_weight_has_finite_blo(self):
        fam = BallFamily.grid(Domain(-1.0, 1.0), n_centers=8, n_radii=4)
        w = max_power_const(1.0, 0.5)
        got = log_oscillation(w, fam, "BLO")
        assert 0.0 < got < math.inf

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            log_oscillation_ball(constant_weight(1.0), Ball(0.0, 0.1), "XXX")
