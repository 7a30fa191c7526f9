from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import coverage_enumeration
from stegogame.budget import (
    BudgetParams,
    coverage_exact_fraction,
    coverage_report,
    max_safe_uses,
    pr_coverage_exact,
    pr_coverage_mc,
    pr_coverage_published,
    pr_remaining_published,
)
from stegogame.errors import InvalidParams


class TestRemainingTerm:
    def test_y_zero_is_one(self):
        for x in (0, 1, 5):
            assert pr_remaining_published(0, x, 2, 5) == 1.0

    def test_single_term_example(self):
        assert pr_remaining_published(1, 2, 2, 3) == pytest.approx(1 / 3)

    def test_beyond_range_is_zero(self):
        assert pr_remaining_published(3, 2, 2, 4) == 0.0

    def test_rejects_negative_y(self):
        with pytest.raises(InvalidParams):
            pr_remaining_published(-1, 1, 2, 4)


class TestPublishedFormula:
    def test_single_term_case_is_exact(self):
        assert pr_coverage_published(2, 2, 3) == pytest.approx(2 / 3)

    def test_leaves_unit_interval(self):
        assert pr_coverage_published(2, 2, 4) == pytest.approx(-1 / 6)

    def test_x_zero_nonpositive(self):
        assert pr_coverage_published(0, 2, 4) <= 0.0

    def test_matches_exact_when_one_term(self):
        # a single subtraction term cannot overshoot
        for T in range(2, 9):
            N = T - 1
            for x in range(0, 5):
                if x == 0:
                    continue
                assert pr_coverage_published(x, N, T) == pr_coverage_exact(x, N, T)


class TestExactCoverage:
    def test_known_fractions(self):
        assert coverage_exact_fraction(2, 2, 3) == Fraction(2, 3)
        assert coverage_exact_fraction(2, 2, 4) == Fraction(1, 6)
        assert coverage_exact_fraction(3, 2, 4) == Fraction(19, 36)

    def test_full_draw_covers_instantly(self):
        for x in (1, 2, 7):
            assert pr_coverage_exact(x, 3, 3) == 1.0

    def test_no_observations_no_coverage(self):
        assert pr_coverage_exact(0, 2, 4) == 0.0
        assert pr_coverage_exact(0, 3, 3) == 0.0

    def test_single_use_below_full_is_zero(self):
        assert pr_coverage_exact(1, 2, 5) == 0.0

    def test_matches_enumeration_oracle(self):
        for T in range(1, 6):
            for N in range(1, T + 1):
                for x in range(0, 4):
                    assert coverage_exact_fraction(x, N, T) == coverage_enumeration(x, N, T), (
                        T,
                        N,
                        x,
                    )

    @given(st.data())
    @settings(max_examples=60)
    def test_bounds_and_monotone_in_x(self, data):
        T = data.draw(st.integers(2, 10))
        N = data.draw(st.integers(1, T))
        x = data.draw(st.integers(0, 12))
        a = coverage_exact_fraction(x, N, T)
        b = coverage_exact_fraction(x + 1, N, T)
        assert 0 <= a <= 1
        assert a <= b

    def test_monotone_in_n(self):
        for T in (4, 7):
            for x in (1, 2, 3):
                values = [coverage_exact_fraction(x, N, T) for N in range(1, T + 1)]
                assert values == sorted(values)

    def test_nonincreasing_in_t(self):
        for N in (2, 3):
            for x in (2, 3):
                values = [coverage_exact_fraction(x, N, T) for T in range(N, 10)]
                assert values == sorted(values, reverse=True)

    def test_rejects_bad_params(self):
        for args in [(1, 0, 3), (1, 4, 3), (-1, 2, 3)]:
            with pytest.raises(InvalidParams):
                pr_coverage_exact(*args)


class TestMaxSafeUses:
    def test_known_answer(self):
        # coverage at x=2 is 1/6 < 0.2, at x=3 is 19/36 >= 0.2
        assert max_safe_uses(2, 4, 0.2) == 2

    def test_full_draw_never_safe(self):
        assert max_safe_uses(3, 3, 0.5) == 0

    def test_answer_brackets_threshold(self):
        for T, N, zeta in [(5, 2, 0.3), (6, 3, 0.1), (8, 2, 0.9)]:
            x = max_safe_uses(N, T, zeta)
            assert pr_coverage_exact(x, N, T) < zeta
            assert pr_coverage_exact(x + 1, N, T) >= zeta

    def test_monotone_in_zeta(self):
        for T, N in [(4, 2), (6, 3), (9, 4)]:
            answers = [max_safe_uses(N, T, z) for z in (0.05, 0.1, 0.25, 0.5, 0.9, 0.99)]
            assert answers == sorted(answers)

    def test_rejects_degenerate_zeta(self):
        for zeta in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(InvalidParams):
                max_safe_uses(2, 4, zeta)


class TestMonteCarlo:
    def test_deterministic(self):
        a = pr_coverage_mc(2, 2, 3, trials=20000, seed=7)
        b = pr_coverage_mc(2, 2, 3, trials=20000, seed=7)
        assert a == b

    def test_partition_invariant(self):
        a = pr_coverage_mc(3, 2, 5, trials=30000, seed=3, max_workers=1)
        b = pr_coverage_mc(3, 2, 5, trials=30000, seed=3, max_workers=4)
        assert a == b

    def test_single_use_partial_draw_is_zero(self):
        est, se = pr_coverage_mc(1, 2, 4, trials=5000, seed=0)
        assert (est, se) == (0.0, 0.0)

    def test_matches_exact_within_error(self):
        for T, N, x in [(3, 2, 2), (4, 2, 3), (5, 3, 2)]:
            est, se = pr_coverage_mc(x, N, T, trials=40000, seed=11)
            assert abs(est - pr_coverage_exact(x, N, T)) <= 4 * se

    def test_rejects_bad_trials(self):
        with pytest.raises(InvalidParams):
            pr_coverage_mc(1, 2, 3, trials=0, seed=0)


class TestParamsAndReport:
    def test_params_validation(self):
        BudgetParams(T=5, N=2, x=1, y=3, zeta=0.5)
        for kwargs in [
            dict(T=2, N=3),
            dict(T=3, N=1, x=-1),
            dict(T=3, N=2, y=2),
            dict(T=3, N=2, zeta=0.0),
            dict(T=3, N=2, zeta=1.0),
        ]:
            with pytest.raises(InvalidParams):
                BudgetParams(**kwargs)

    def test_report_flags_published_flaw(self):
        rep = coverage_report(2, 2, 4)
        assert rep.p_published == pytest.approx(-1 / 6)
        assert rep.p_exact == pytest.approx(1 / 6)
        assert not rep.published_in_range
        assert not rep.published_matches_exact

    def test_report_flags_agreement(self):
        rep = coverage_report(2, 2, 3, mc_trials=20000, seed=5)
        assert rep.published_matches_exact
        assert rep.published_in_range
        assert rep.mc_within_4se
