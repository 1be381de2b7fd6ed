from fractions import Fraction
from math import comb, isclose

import pytest

from genset import (
    BoundParams,
    CapExceeded,
    GensetError,
    analytic_union_bound,
    bound_table,
    canonical_generator,
    canonical_size,
    coverage_inequality_check,
    count_disjoint_tuples,
    is_k_generator,
    lemma4_bound,
    make_family,
    small_union_probability,
    trivial_lower_bound,
    union_bound_check,
)
from genset.bounds import pow2


def family_of_size_32_on_9():
    # First 32 members of the canonical 2-class generator on [9]; a power-of-two
    # size makes the derived delta exact: 5/9 - 1/3 = 2/9.
    fam = canonical_generator(9, 2)
    return make_family(9, fam.members[:32])


class TestPow2:
    def test_integer_exponents_exact(self):
        assert pow2(Fraction(5)).value == 32
        assert pow2(Fraction(-3)).value == Fraction(1, 8)
        assert pow2(Fraction(5)).exact

    def test_fractional_exponent_reports_precision(self):
        val = pow2(Fraction(3, 2), precision_bits=120)
        assert not val.exact
        assert val.precision_bits == 120
        assert isclose(float(val.value), 2**1.5, rel_tol=1e-12)


class TestLemma4Bound:
    def test_reference_values(self):
        # n(1 - delta t) = 10 (1 - 1/2) = 5, so the bound is 3 * 32 * C(32,3)^3 / 6.
        value = lemma4_bound(BoundParams(n=10, k=2, m=32, t=3))
        assert value.exact
        assert value.value == 16 * comb(32, 3) ** 3 == 1_952_382_976_000

    def test_exponent_collapse_when_delta_t_is_one(self):
        p = BoundParams(n=12, k=2, m=2**5, t=12)  # delta = 5/12 - 1/3 = 1/12, so delta*t = 1
        value = lemma4_bound(p)
        assert value.exact
        assert value.value == Fraction(3 * comb(p.m, p.t) ** 3, 6)  # 2^0 factor

    def test_k1_instantiation(self):
        # k=1, t=1: bound is 2 * 2^{n(1-delta)} * m^2 / 2.
        p = BoundParams(n=8, k=1, m=32, t=1)  # delta = 5/8 - 1/2 = 1/8
        value = lemma4_bound(p)
        assert value.value == Fraction(2**7 * 32**2)

    def test_consistency_with_analytic_factor(self):
        p = BoundParams(n=10, k=2, m=32, t=3)
        delta = p.resolved_delta().value
        factor = pow2(p.n * (1 - delta * p.t)).value
        expected = Fraction((p.k + 1) * comb(p.m, p.t) ** (p.k + 1), 6) * factor
        assert lemma4_bound(p).value == expected

    def test_inexact_delta_is_evaluated_at_reported_precision(self):
        value = lemma4_bound(BoundParams(n=10, k=2, m=33, t=3))
        assert not value.exact
        assert value.precision_bits == 113

    def test_nonpositive_delta_rejected(self):
        with pytest.raises(GensetError):
            lemma4_bound(BoundParams(n=9, k=2, m=8, t=2))  # delta = 0


class TestAnalyticUnionBound:
    def test_reference_value(self):
        value = analytic_union_bound(9, 2, 32, 3)
        assert value.exact and value.value == 8  # 512 * (8/32)^3

    def test_t_zero(self):
        assert analytic_union_bound(10, 2, 7, 0).value == 2**10

    def test_m_at_scale_gives_2_to_n(self):
        for t in range(4):
            assert analytic_union_bound(9, 2, 8, t).value == 2**9

    def test_non_integral_exponent_high_precision(self):
        value = analytic_union_bound(10, 2, 32, 2)
        assert not value.exact and value.precision_bits == 113
        assert isclose(float(value.value), 2**10 * (2 ** (10 / 3) / 32) ** 2, rel_tol=1e-12)


class TestSmallUnionProbability:
    def test_canonical_4_2_pairs(self):
        est = small_union_probability(canonical_generator(4, 2), 2, 2)
        assert est.exact and est.value == Fraction(2, 3)

    def test_threshold_n_is_certain(self):
        fam = canonical_generator(5, 2)
        assert small_union_probability(fam, 3, 5).value == 1

    def test_singletons_never_have_empty_union(self):
        fam = canonical_generator(4, 2)
        assert small_union_probability(fam, 1, 0).value == 0

    def test_sampled_mode_reproducible_and_near_exact(self):
        fam = canonical_generator(4, 2)
        a = small_union_probability(fam, 2, 2, seed=20240817, trials=100_000)
        b = small_union_probability(fam, 2, 2, seed=20240817, trials=100_000)
        assert a.value == b.value and a.trials == 100_000
        assert abs(a.value - 2 / 3) <= 3 * a.std_error

    def test_seed_required_for_sampling(self):
        with pytest.raises(GensetError):
            small_union_probability(canonical_generator(4, 2), 2, 2, trials=10)

    def test_exact_budget(self):
        fam = canonical_generator(10, 2)
        with pytest.raises(CapExceeded):
            small_union_probability(fam, 4, 3, exact_budget=100)


class TestUnionBoundCheck:
    def test_in_regime_exact_case(self):
        report = union_bound_check(family_of_size_32_on_9(), 2, t=3)
        assert report.in_regime
        assert report.probability.exact and report.analytic.exact
        assert report.bound_holds
        assert report.threshold == 3

    def test_in_regime_exact_grid(self):
        fam9 = canonical_generator(9, 2)
        for size in (16, 32):
            for t in (2, 3, 4):
                fam = make_family(9, fam9.members[:size])
                report = union_bound_check(fam, 2, t=t)
                if report.in_regime:
                    assert report.bound_holds

    def test_out_of_regime_still_evaluated(self):
        fam = make_family(9, canonical_generator(9, 2).members[:8])  # m = 2^{n/(k+1)}
        report = union_bound_check(fam, 2, t=2)
        assert not report.in_regime
        assert report.probability is not None and report.analytic is not None

    def test_sampled_mode_deterministic(self):
        fam = family_of_size_32_on_9()
        a = union_bound_check(fam, 2, t=3, seed=7, trials=2000)
        b = union_bound_check(fam, 2, t=3, seed=7, trials=2000)
        assert a.probability.value == b.probability.value

    def test_k_zero_rejected(self):
        with pytest.raises(GensetError):
            union_bound_check(canonical_generator(4, 2), 0, t=1)


class TestCoverageInequality:
    def test_canonical_3_2(self):
        report = coverage_inequality_check(canonical_generator(3, 2), 2)
        assert report.tuples == 9 and report.two_to_n == 8 and report.holds

    def test_canonical_4_2_against_enumeration(self):
        fam = canonical_generator(4, 2)
        report = coverage_inequality_check(fam, 2, verified_generator=True)
        assert report.tuples == count_disjoint_tuples(fam, 2)
        assert report.holds and report.verified_generator

    def test_non_generator_can_fail(self):
        report = coverage_inequality_check(make_family(2, [0b01]), 2)
        assert report.tuples == 2 and not report.holds


class TestBoundTable:
    def test_reference_row(self):
        (row,) = bound_table([12], [2])
        assert row.canonical_size == 126
        assert row.strong_constant_bound == 128.0

    def test_n_equals_k_rows(self):
        rows = bound_table(range(1, 8), range(1, 8))
        for row in rows:
            if row.n == row.k:
                assert row.canonical_size == row.n

    def test_row_inequalities(self):
        for row in bound_table(range(1, 20), range(1, 6)):
            assert row.trivial_bound <= row.canonical_size
            assert row.weak_constant_bound <= row.strong_constant_bound + 1e-9
            assert trivial_lower_bound(row.n, row.k) == row.trivial_bound
            assert canonical_size(row.n, row.k) == row.canonical_size

    def test_skips_invalid_pairs(self):
        rows = bound_table([2], [1, 2, 3])
        assert [(r.n, r.k) for r in rows] == [(2, 1), (2, 2)]


class TestBoundParams:
    def test_delta_derived_exactly_for_power_of_two(self):
        d = BoundParams(n=10, k=2, m=32, t=3).resolved_delta()
        assert d.exact and d.value == Fraction(1, 6)

    def test_delta_inexact_otherwise(self):
        d = BoundParams(n=10, k=2, m=33, t=3).resolved_delta()
        assert not d.exact and d.precision_bits == 113

    def test_explicit_delta_wins(self):
        d = BoundParams(n=10, k=2, m=33, t=3, delta=Fraction(1, 7)).resolved_delta()
        assert d.exact and d.value == Fraction(1, 7)

    def test_validation(self):
        with pytest.raises(GensetError):
            BoundParams(n=10, k=2, m=32, t=0).validate()
        with pytest.raises(GensetError):
            BoundParams(n=4, k=2, m=8, t=1, threshold=9).validate()
