import math
from fractions import Fraction

import pytest

from kneserlab.bounds import (
    case_i_bound,
    case_ii_bound,
    chromatic_formula,
    lemma31_lhs,
    lemma42_lhs,
    schedule,
    shadow_bound,
    thm1_bound,
    threshold_check,
    upper_cond,
)
from kneserlab.combinatorics import binom_exact, ceil_div


class TestChromaticFormula:
    def test_examples(self):
        assert chromatic_formula(5, 2, 2) == 3
        assert chromatic_formula(9, 2, 3) == 3

    @pytest.mark.parametrize("r,k", [(2, 1), (2, 3), (3, 2), (4, 2), (5, 3)])
    def test_single_edge_threshold(self, r, k):
        assert chromatic_formula(r * k, k, r) == 2

    def test_below_rk_edgeless(self):
        assert chromatic_formula(5, 3, 2) == 1

    def test_r2_identity_grid(self):
        for k in range(1, 8):
            for n in range(2 * k, 201):
                assert chromatic_formula(n, k, 2) == n - 2 * k + 2


class TestSchedule:
    def test_reference_example(self):
        s = schedule(100, 5, 2, 2)
        assert s.beta == Fraction(1)
        assert s.s == 5.0
        assert s.u == 3
        assert s.d == 87
        assert s.q == (7, 14, 28, 56)
        assert s.t[0] == 1
        assert s.z[0] == 1

    def test_r2_s_is_always_five(self):
        for l in (1, 2, 5, 9):
            assert schedule(60, 3, l, 2).s == 5.0

    def test_r4_s_unrounded(self):
        s = schedule(100, 5, 2, 4)
        assert s.s == pytest.approx(9 * 2 ** (1 / 3) * 5, rel=1e-12)

    def test_t0_equals_quotient_t(self):
        for n, k, l, r in ((100, 5, 2, 2), (40, 3, 2, 3), (60, 2, 3, 4)):
            s = schedule(n, k, l, r)
            d = chromatic_formula(n, k + l, r) - 1
            assert s.t[0] == ceil_div(binom_exact(k + l, k), d)

    def test_q_growth_cap(self):
        # q_i <= 2 l^{beta-1} q_{i-1}
        for n, k, l, r in ((100, 5, 2, 2), (200, 3, 4, 3), (90, 2, 3, 4), (64, 2, 1, 2)):
            s = schedule(n, k, l, r)
            cap = 2 * l ** (float(s.beta) - 1)
            for prev, cur in zip(s.q, s.q[1:]):
                assert cur <= cap * prev + 1e-9
            assert s.q[-1] <= n

    def test_preconditions(self):
        with pytest.raises(ValueError):
            schedule(5, 2, 1, 2)  # n below r(k+l)
        with pytest.raises(ValueError):
            schedule(100, 5, 2, 1)


class TestThm1Bound:
    def test_hand_value(self):
        rep = thm1_bound(1, 4, 2, 2, 0.5)
        assert rep.ln_bound.ln_value == pytest.approx(math.log(2.25), abs=1e-12)

    def test_d1_reduces_to_exponent(self):
        for m, r, p in ((3, 2, 0.3), (5, 3, 0.7)):
            rep = thm1_bound(1, m, 1, r, p)
            assert rep.ln_bound.ln_value == pytest.approx(m**r * math.log1p(-p), abs=1e-12)

    def test_petersen_hand_value(self):
        rep = thm1_bound(15, 3, 3, 2, 0.5)
        assert rep.ln_bound.ln_value == pytest.approx(math.log(67.5), abs=1e-12)

    def test_zero_edges_exact_zero(self):
        rep = thm1_bound(0, 4, 2, 2, 0.5)
        assert rep.ln_bound.is_zero

    def test_vacuous_flag(self):
        assert thm1_bound(10**6, 4, 2, 2, 0.01).vacuous
        assert not thm1_bound(1, 4, 2, 2, 0.99).vacuous

    def test_invalid_p(self):
        for p in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                thm1_bound(1, 4, 2, 2, p)

    def test_component_sum_invariant(self):
        for p in (0.1, 0.5, 0.9):
            for m, d in ((4, 2), (9, 4), (21, 5)):
                rep = thm1_bound(100, m, d, 2, p)
                assert rep.ln_bound.ln_value == pytest.approx(
                    math.fsum(rep.components.values()), abs=1e-12
                )


class TestLemma31:
    def test_hand_value(self):
        d = chromatic_formula(100, 7, 2) - 1
        assert d == 87
        t = ceil_div(binom_exact(7, 5), d)
        assert t == 1
        want = 3 * 2 * ((5 + 2) * math.log(100 / 5) + t * math.log(d)) - 0.5 * t**2
        assert lemma31_lhs(100, 5, 2, 2, 0.5) == pytest.approx(want, abs=1e-12)

    def test_d1_log_term_vanishes(self):
        # n = r(k+l) makes the formula value 2, so d = 1 and t ln d = 0
        n, k, l, r = 6, 1, 2, 2
        t = ceil_div(binom_exact(3, 1), 1)
        want = 3 * 2 * ((k + l) * math.log(n / k)) - 0.25 * float(t) ** 2
        assert lemma31_lhs(n, k, l, r, 0.25) == pytest.approx(want, abs=1e-12)

    def test_sign_flips_negative_as_k_grows(self):
        # growing k with n fixed eventually makes the t^r term dominate: the
        # sweep decreases monotonically past its peak and goes negative
        vals = [lemma31_lhs(100, k, 2, 2, 0.5) for k in range(33, 49)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[0] > 0 > vals[-1]

    def test_d0_rejected(self):
        with pytest.raises(ValueError):
            lemma31_lhs(5, 2, 1, 2, 0.5)  # rk <= n < r(k+l): formula 1, d 0


class TestCaseBounds:
    def setup_method(self):
        self.sched = schedule(100, 5, 2, 2)

    def test_case_i_hand_assembly(self):
        s = self.sched
        p = 0.5
        want = (
            2 * math.log(binom_exact(100, s.q[0]))
            + 2 * math.log(binom_exact(binom_exact(s.q[0], 5), s.z[0]))
            + float(s.z[0]) ** 2 * math.log1p(-p)
        )
        rep = case_i_bound(s, 0, p)
        assert rep.ln_bound.ln_value == pytest.approx(want, rel=1e-12)

    def test_case_i_z1_reduction(self):
        s = self.sched
        assert s.z[0] == 1
        rep = case_i_bound(s, 0, 0.5)
        want_middle = 2 * math.log(binom_exact(s.q[0], 5))
        assert rep.components["color_class_choices"] == pytest.approx(want_middle, rel=1e-12)

    def test_case_i_decreasing_in_p(self):
        vals = [case_i_bound(self.sched, 1, p).ln_bound.ln_value for p in (0.1, 0.5, 0.9, 0.999)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_case_i_level_range(self):
        with pytest.raises(ValueError):
            case_i_bound(self.sched, 4, 0.5)
        with pytest.raises(ValueError):
            case_i_bound(self.sched, -1, 0.5)

    def test_case_ii_hand_assembly(self):
        s = self.sched
        p = 0.5
        want = (
            2 * s.q[1] * math.log(100)
            + 2 * math.log(binom_exact(binom_exact(s.q[1], 5), s.z[1]))
            + float(s.t[0]) * float(s.z[1]) * math.log1p(-p)
        )
        rep = case_ii_bound(s, 0, p)
        assert rep.ln_bound.ln_value == pytest.approx(want, rel=1e-12)

    def test_case_ii_t1_z1_reduction(self):
        # engineered so t_i = z_{i+1} = 1: tiny subset counts
        s = schedule(64, 1, 1, 2)
        assert s.t[0] == 1 and s.z[1] == 1
        rep = case_ii_bound(s, 0, 0.3)
        want = (
            2 * s.q[1] * math.log(64)
            + 2 * math.log(binom_exact(s.q[1], 1))
            + math.log1p(-0.3)
        )
        assert rep.ln_bound.ln_value == pytest.approx(want, rel=1e-12)

    def test_case_ii_top_level_rejected(self):
        with pytest.raises(ValueError):
            case_ii_bound(self.sched, self.sched.u, 0.5)

    def test_component_sums(self):
        for i in range(self.sched.u + 1):
            rep = case_i_bound(self.sched, i, 0.25)
            assert rep.ln_bound.ln_value == pytest.approx(
                math.fsum(rep.components.values()), abs=1e-12
            )
        for i in range(self.sched.u):
            rep = case_ii_bound(self.sched, i, 0.25)
            assert rep.ln_bound.ln_value == pytest.approx(
                math.fsum(rep.components.values()), abs=1e-12
            )


class TestLemma42:
    def test_hand_values(self):
        s = schedule(100, 5, 2, 2)
        p = 0.5
        first, second = lemma42_lhs(s, 0, p)
        want_first = (
            3 * 2 * (s.q[0] * math.log(100) + s.z[0] * math.log(2 * s.s * s.q[0]))
            - p * float(s.z[0]) ** 2
        )
        want_second = (
            3 * 2 * (s.q[1] * math.log(100) + s.z[1] * math.log(2 * s.s * s.q[1]))
            - p * float(s.t[0]) * float(s.z[1])
        )
        assert first == pytest.approx(want_first, abs=1e-12)
        assert second == pytest.approx(want_second, abs=1e-12)

    def test_z1_first_value_reduction(self):
        s = schedule(100, 5, 2, 2)
        assert s.z[0] == 1
        first, _ = lemma42_lhs(s, 0, 0.5)
        want = 3 * 2 * (s.q[0] * math.log(100) + math.log(2 * s.s * s.q[0])) - 0.5
        assert first == pytest.approx(want, abs=1e-12)

    def test_top_level_second_is_none(self):
        s = schedule(100, 5, 2, 2)
        first, second = lemma42_lhs(s, s.u, 0.5)
        assert second is None and math.isfinite(first)

    def test_decreasing_in_p(self):
        s = schedule(100, 5, 2, 2)
        vals = [lemma42_lhs(s, 0, p)[0] for p in (0.1, 0.4, 0.8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_level_range(self):
        s = schedule(100, 5, 2, 2)
        with pytest.raises(ValueError):
            lemma42_lhs(s, s.u + 1, 0.5)


class TestThresholds:
    def test_r2_example(self):
        # C(20,10) = 184756 versus 100 ln 100 = 460.5
        preds = threshold_check(100, 10, 10, 2, 1.0)
        assert set(preds) == {"pair_count_vs_nlogn"}
        pred = preds["pair_count_vs_nlogn"]
        assert pred.holds
        assert pred.ln_lhs == pytest.approx(math.log(184756), rel=1e-10)
        assert pred.ln_rhs == pytest.approx(math.log(100 * math.log(100)), rel=1e-10)

    def test_case_selection_by_r(self):
        assert set(threshold_check(50, 3, 2, 2, 1.0)) == {"pair_count_vs_nlogn"}
        assert set(threshold_check(50, 3, 2, 3, 1.0)) == {
            "subset_count_cubed",
            "doubled_window_squared",
        }
        assert set(threshold_check(50, 3, 2, 5, 1.0)) == {
            "subset_count_power",
            "doubled_window_power",
        }

    def test_monotone_in_constant(self):
        # doubling C can only turn true into false
        for r in (2, 3, 4):
            for c in (0.5, 1.0, 4.0, 64.0):
                now = threshold_check(200, 4, 3, r, c)
                doubled = threshold_check(200, 4, 3, r, 2 * c)
                for name in now:
                    if doubled[name].holds:
                        assert now[name].holds

    def test_bad_constant(self):
        with pytest.raises(ValueError):
            threshold_check(10, 2, 1, 2, 0.0)


class TestUpperCond:
    def test_hand_value(self):
        assert upper_cond(16, 1, 1, 2, 0.5) == pytest.approx(math.log(0.25), abs=1e-12)

    def test_l0_degenerate_product(self):
        # product becomes prod C(ik, k)
        want = math.log(20) + binom_exact(2, 2) * binom_exact(4, 2) * math.log1p(-0.3)
        assert upper_cond(20, 2, 0, 2, 0.3) == pytest.approx(want, abs=1e-12)

    def test_strictly_decreasing_in_p(self):
        vals = [upper_cond(16, 1, 1, 2, p) for p in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            upper_cond(16, 1, 1, 2, 0.0)


class TestShadowBound:
    def test_t1_reduction(self):
        k, l, r, p = 2, 1, 2, 0.4
        m = binom_exact(k + l, k)
        rep = shadow_bound(50, k, l, m, r, p)  # d >= C(k+l,k) forces T = 1
        want = math.log(50) + r * math.log(m) + math.log1p(-p)
        assert rep.ln_bound.ln_value == pytest.approx(want, abs=1e-12)

    def test_full_family_matches_thm1(self):
        # at (n,k,l) = (8,2,1) the shadow of the full family is the full family,
        # so the bound must agree with the blow-up bound term by term
        n, k, l, r, p = 8, 2, 1, 2, 0.5
        d = chromatic_formula(n, k + l, r) - 1
        fam_size = binom_exact(n, k)
        srep = shadow_bound(fam_size, k, l, d, r, p)
        trep = thm1_bound(fam_size, binom_exact(k + l, k), d, r, p)
        assert srep.ln_bound.ln_value == pytest.approx(trep.ln_bound.ln_value, rel=1e-12)
        assert srep.components["color_class_choices"] == pytest.approx(
            trep.components["part_choices"], rel=1e-12
        )
        assert srep.components["empty_pattern"] == pytest.approx(
            trep.components["empty_pattern"], rel=1e-12
        )

    def test_p_toward_one_plunges(self):
        vals = [
            shadow_bound(50, 2, 1, 2, 2, p).ln_bound.ln_value
            for p in (0.5, 0.9, 0.99, 0.9999)
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_empty_family_exact_zero(self):
        assert shadow_bound(0, 2, 1, 2, 2, 0.5).ln_bound.is_zero
