import math
from fractions import Fraction as F

import pytest

from rcweights.numlab import (
    Ball, BallFamily, Domain, constant_weight, estimate_constant,
    power_ap_oracle, power_weight, stability_probe, weak_estimate,
)

DOM = Domain(-1.0, 1.0)


class TestBallFamilies:
    def test_centered_radii_ladder(self):
        fam = BallFamily.centered(DOM, n_radii=5, min_radius_ratio=0.01)
        radii = [b.radius for b in fam]
        assert len(fam) == 5
        assert radii[0] == pytest.approx(0.5)       # largest admissible
        assert radii[-1] == pytest.approx(0.005)
        assert all(a > b for a, b in zip(radii, radii[1:]))
        assert all(b.center == 0.0 for b in fam)

    def test_grid_counts_and_admissibility(self):
        fam = BallFamily.grid(DOM, n_centers=10, n_radii=4)
        assert len(fam) == 40
        for ball in fam:
            assert ball.admissible_in(DOM)

    def test_deterministic_generation(self):
        a = BallFamily.grid(DOM, 7, 3)
        b = BallFamily.grid(DOM, 7, 3)
        assert a.balls == b.balls

    def test_inadmissible_rejected(self):
        with pytest.raises(ValueError):
            BallFamily(DOM, (Ball(0.9, 0.2),))


class TestEstimateConstant:
    def test_centered_a3_exact(self):
        fam = BallFamily.centered(DOM, n_radii=20)
        rep = estimate_constant(power_weight(1.0), fam, F(-1, 2), 1)
        assert rep.sup == pytest.approx(2.0, abs=1e-9)
        assert not rep.divergent
        assert all(r >= 1.0 - 1e-9 for r in rep.ratios)

    def test_centered_a3_quadrature(self):
        fam = BallFamily.centered(DOM, n_radii=20)
        rep = estimate_constant(power_weight(1.0), fam, F(-1, 2), 1,
                                resolution=10_000, method="quadrature")
        assert rep.sup == pytest.approx(2.0, abs=1e-3)

    def test_divergence_flagged(self):
        fam = BallFamily.centered(DOM, n_radii=10)
        rep = estimate_constant(power_weight(1.0), fam, -1, 1)
        assert rep.divergent and rep.sup == math.inf

    def test_constant_weight_all_ones(self):
        fam = BallFamily.grid(DOM, 6, 3)
        rep = estimate_constant(constant_weight(2.0), fam, -1, 1)
        assert rep.sup == pytest.approx(1.0)
        assert all(r == pytest.approx(1.0) for r in rep.ratios)

    def test_argmax_tie_breaks_to_lowest_index(self):
        fam = BallFamily.centered(DOM, n_radii=8)
        rep = estimate_constant(power_weight(1.0), fam, F(-1, 2), 1)
        # every centered ball gives exactly 2, so index 0 wins
        assert rep.argmax_index == 0
        assert rep.argmax_ball == fam.balls[0]

    def test_report_encoding(self):
        fam = BallFamily.centered(DOM, n_radii=4)
        rep = estimate_constant(power_weight(1.0), fam, -1, 1)
        enc = rep.to_dict()
        assert enc["schema"] == "rcweights.estimate/1"
        assert enc["sup"] == "inf"
        assert enc["divergent"] is True
        assert enc["pair"] == ["-1", "1"]
        assert "lower bound" in enc["note"]

    def test_zero_sentinel_encoding(self):
        from rcweights.numlab.estimate import _encode
        assert _encode(0.0) == "zero"
        assert _encode(math.inf) == "inf"
        assert _encode(1.5) == 1.5

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            estimate_constant(constant_weight(1.0),
                              BallFamily(DOM, ()), -1, 1)

    def test_lower_bound_property(self):
        # a finite family never exceeds a strictly larger family's sup
        small = BallFamily.grid(DOM, 4, 3)
        large = BallFamily.grid(DOM, 16, 6)
        w = power_weight(1.0)
        s = estimate_constant(w, small, F(-1, 2), 1).sup
        l = estimate_constant(w, large, F(-1, 2), 1).sup
        assert s <= l + 1e-12


class TestWeakEstimate:
    def test_constant_weight_value(self):
        fam = BallFamily.centered(DOM, n_radii=6)
        for r in (1, 2):
            rep = weak_estimate(constant_weight(1.0), fam, r, r + 1)
            assert rep.sup == pytest.approx(2.0 ** (-1.0 / r), abs=1e-12)
            assert rep.mode == "weak"

    def test_weak_at_most_scaled_strong(self):
        fam = BallFamily.grid(DOM, 8, 4)
        w = power_weight(1.0)
        strong = estimate_constant(w, fam, 1, 2)
        weak = weak_estimate(w, fam, 1, 2)
        assert weak.sup <= 2.0 ** (1.0 / 1.0) * strong.sup + 1e-12


class TestPowerOracle:
    @pytest.mark.parametrize("a,n,p,want", [
        (1.0, 1, 3, True),          # used as the stable factor
        (4.0, 1, 5, False),         # the divergent product
        (0.0, 1, 2, True),          # constant weight
        (3.0, 1, 5, True),
        (-0.99, 1, 1, True),        # boundary form at p = 1
        (0.0, 1, 1, True),
        (0.5, 1, 1, False),
        (-1.0, 1, 2, False),        # left edge excluded
        (1.0, 1, 2, False),         # right edge excluded (a = n(p-1))
        (2.5, 3, 2, True),          # higher dimension
        (-3.0, 3, 2, False),
    ])
    def test_table(self, a, n, p, want):
        assert power_ap_oracle(a, n, p) is want

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            power_ap_oracle(1.0, 1, 0.5)
        with pytest.raises(ValueError):
            power_ap_oracle(1.0, 1, "inf")
        with pytest.raises(ValueError):
            power_ap_oracle(1.0, 0, 2)

    def test_matches_empirical_divergence(self):
        # oracle verdicts agree with the estimator's divergence flag on
        # a family whose balls reach the singularity
        fam = BallFamily.grid(DOM, n_centers=9, n_radii=4)
        for a in (-0.5, 0.5, 1.0, 2.5):
            for p in (1.5, 2, 3):
                from rcweights.exponents import ap_exponent
                pair = ap_exponent(p)
                rep = estimate_constant(power_weight(a), fam, pair.lo, pair.hi)
                assert rep.divergent == (not power_ap_oracle(a, 1, p))


class OpaqueWeight:
    """Wrapper hiding all analytic structure: quadrature + heuristic only."""

    analytic_divergence = False

    def __init__(self, inner):
        self._inner = inner

    def value(self, x):
        return self._inner.value(x)

    def values(self, xs):
        return self._inner.values(xs)

    def cut_points(self, lo, hi):
        return []

    def side_exponents(self, x):
        return (0.0, 0.0)

    def singular_candidates(self, lo, hi):
        return []

    def pow_divergent(self, lo, hi, p):
        return False

    def pow_integral(self, lo, hi, p):
        return None

    def log_integral(self, lo, hi):
        return None

    def abs_log_dev_integral(self, lo, hi, m):
        return None

    def ess_range(self, lo, hi):
        return None

    def describe(self):
        return f"opaque({self._inner.describe()})"


class TestDivergenceDetection:
    def test_refinement_monotone_for_oracle_failures(self):
        # analytic sentinel: the estimate is already infinite at every
        # resolution, so refinement never decreases it
        fam = BallFamily.centered(DOM, n_radii=6)
        w = power_weight(4.0)
        sups = [estimate_constant(w, fam, F(-1, 4), 1, resolution=res).sup
                for res in (1000, 2000, 4000)]
        assert all(a <= b for a, b in zip(sups, sups[1:]))
        assert sups[-1] > 1e3

    def test_growth_heuristic_for_opaque_weights(self):
        # no analytic structure: the stated heuristic (tenfold growth
        # under two successive doublings) must flag a strong blow-up
        from rcweights.numlab import integral_pow
        w = OpaqueWeight(power_weight(1.0))
        got = integral_pow(w, -0.5, 0.5, -5.0, resolution=4096)
        assert got == math.inf

    def test_heuristic_leaves_convergent_integrals_alone(self):
        from rcweights.numlab import integral_pow
        w = OpaqueWeight(power_weight(1.0))
        got = integral_pow(w, 0.25, 0.75, 2.0, resolution=4096)
        exact = power_weight(1.0).pow_integral(0.25, 0.75, 2.0)
        assert got == pytest.approx(exact, rel=1e-6)


class TestStabilityProbe:
    def test_exact_path_is_stable(self):
        fam = BallFamily.centered(DOM, n_radii=8)
        out = stability_probe(power_weight(1.0), fam, F(-1, 2), 1, 2000)
        assert out["stable"] and not out["divergent"]
        assert out["relative_change"] == pytest.approx(0.0, abs=1e-15)

    def test_quadrature_path_stabilizes(self):
        fam = BallFamily.centered(DOM, n_radii=5)
        out = stability_probe(power_weight(1.0), fam, F(-1, 2), 1, 4000,
                              method="quadrature")
        assert out["stable"]

    def test_divergent_probe(self):
        fam = BallFamily.centered(DOM, n_radii=5)
        out = stability_probe(power_weight(4.0), fam, F(-1, 4), 1, 1000)
        assert out["divergent"] and not out["stable"]
