from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_beta.beta_engine import alt_power_sum, beta_F, beta_F_sum
from harmonic_beta.harmonic_core import DomainError, harmonic_number
from harmonic_beta.identity_suite import (
    FAIL,
    PASS,
    SKIPPED,
    IdentityReport,
    binomial_inverse,
    check_beta_equality,
    check_inversion,
    check_lemma_a,
    check_theorem_2_2,
    check_theorem_2_3,
    check_theorem_2_5,
    check_theorem_2_6_finite,
    deliberate_mismatch_check,
    generic_check,
    mixed_derivative_form,
    run_all,
)

rational_seqs = st.lists(
    st.fractions(max_denominator=50, min_value=-50, max_value=50), max_size=32
)


class TestBinomialInverse:
    def test_delta_to_ones(self):
        assert binomial_inverse([1, 0, 0, 0]) == [1, 1, 1, 1]

    def test_ones_to_delta(self):
        assert binomial_inverse([1, 1, 1, 1]) == [1, 0, 0, 0]

    def test_beta_instance(self):
        x = Fraction(1, 2)
        a = [1 / (x + k + 1) for k in range(12)]
        b = binomial_inverse(a)
        for n in range(12):
            assert b[n] == beta_F(n, x)

    @given(rational_seqs)
    def test_involution(self, seq):
        assert binomial_inverse(binomial_inverse(seq)) == seq

    @given(rational_seqs, st.fractions(max_denominator=20, min_value=-5, max_value=5))
    def test_prefix_stability(self, seq, extra):
        longer = binomial_inverse(list(seq) + [extra])
        shorter = binomial_inverse(seq)
        assert longer[: len(seq)] == shorter

    def test_duality_forward_to_inverted(self):
        forward = [harmonic_number(k + 1, 1) / (k + 1) for k in range(20)]
        inverted = binomial_inverse(forward)
        for n in range(20):
            assert inverted[n] == Fraction(1, (n + 1) ** 2)


class TestGenericCheck:
    def test_reflexive_pass(self):
        reports = generic_check(
            "self", beta_F, beta_F, [{"n": n, "x": Fraction(0)} for n in range(11)]
        )
        assert all(r.status == PASS for r in reports)

    def test_two_routes_pass(self):
        reports = generic_check(
            "beta-eq",
            beta_F,
            beta_F_sum,
            [{"n": n, "x": Fraction(0)} for n in range(11)],
        )
        assert all(r.status == PASS for r in reports)

    def test_deliberate_mismatch_witness(self):
        reports = deliberate_mismatch_check(10)
        assert all(r.status == FAIL for r in reports)
        assert reports[0].params == {"n": 0}
        assert reports[0].witness == (Fraction(1), Fraction(1, 2))

    def test_precondition_violation_becomes_skip(self):
        def touchy(n):
            if n % 2:
                raise DomainError("odd n unsupported")
            return Fraction(n)

        reports = generic_check(
            "touchy", touchy, lambda n: Fraction(n), [{"n": n} for n in range(4)]
        )
        assert [r.status for r in reports] == [PASS, SKIPPED, PASS, SKIPPED]
        assert reports[1].reason == "odd n unsupported"
        assert reports[1].witness is None

    def test_witness_only_on_fail(self):
        for report in deliberate_mismatch_check(3) + generic_check(
            "ok", beta_F, beta_F, [{"n": 1, "x": Fraction(0)}]
        ):
            assert (report.witness is not None) == (report.status == FAIL)


def _brute_alternating(n, term):
    from math import comb

    return sum((-1) ** k * comb(n, k) * term(k) for k in range(n + 1))


class TestTheorem22:
    def test_sweep_passes(self):
        reports = check_theorem_2_2(12, [Fraction(0), Fraction(1, 2), Fraction(7, 3)])
        assert reports and all(r.status == PASS for r in reports)

    def test_x0_spot_value_brute_force(self):
        # oracle: both sides assembled from scratch
        lhs = _brute_alternating(
            2, lambda k: harmonic_number(k + 1, 1) / Fraction(k + 1)
        )
        assert lhs == Fraction(1, 9)

    def test_single_term_case(self):
        x = Fraction(2, 5)
        lhs = (1 / (x + 1)) * beta_F(0, x)
        assert lhs == 1 / (x + 1) ** 2

    def test_forward_spot_value(self):
        assert alt_power_sum(2, 0, 2) == Fraction(11, 18)
        assert Fraction(11, 18) == harmonic_number(3, 1) / 3


class TestTheorem23:
    def test_sweep_passes(self):
        reports = check_theorem_2_3(10, [Fraction(0), Fraction(1, 2), Fraction(7, 3)])
        assert reports and all(r.status == PASS for r in reports)

    def test_r2_display_at_origin(self):
        lhs = 2 * alt_power_sum(0, 0, 3)
        h1 = harmonic_number(1, 1)
        h2 = harmonic_number(1, 2)
        assert lhs == (h2 + h1 * h1) / 1 == 2

    def test_inverted_r2_spot_value_brute_force(self):
        def term(k):
            h1 = sum(Fraction(1, j + 1) for j in range(k + 1))
            h2 = sum(Fraction(1, (j + 1) ** 2) for j in range(k + 1))
            return (h2 + h1 * h1) * beta_F(k, 0)

        lhs = _brute_alternating(1, term) / 2
        assert lhs == Fraction(1, 8)

    def test_deeper_sweep_single_x(self):
        reports = check_theorem_2_3(25, [Fraction(7, 3)])
        assert all(r.status == PASS for r in reports)


class TestTheorem25:
    def test_sweep_passes(self):
        reports = check_theorem_2_5(10, [Fraction(0), Fraction(1, 2)])
        assert reports and all(r.status == PASS for r in reports)

    def test_coefficient_sum_case(self):
        # n=0, x=0: every harmonic value is 1, so the display collapses to
        # (6+8+3+6+1)/4! = 1
        assert alt_power_sum(0, 0, 5) == Fraction(6 + 8 + 3 + 6 + 1, 24) == 1

    def test_n1_x0_brute_force(self):
        def display(k):
            h = [
                sum(Fraction(1, (j + 1) ** a) for j in range(k + 1))
                for a in range(1, 5)
            ]
            return 6 * h[3] + 8 * h[2] * h[0] + 3 * h[1] ** 2 + 6 * h[0] ** 2 * h[1] + h[0] ** 4

        lhs = alt_power_sum(1, 0, 5)
        rhs = display(1) / Fraction(24 * 2)
        assert lhs == rhs

    def test_deeper_sweep_single_x(self):
        reports = check_theorem_2_5(25, [Fraction(1, 2)])
        assert all(r.status == PASS for r in reports)


class TestTheorem26Finite:
    def test_base_case_reduces_to_first_order_form(self):
        for n in range(10):
            x = Fraction(1, 2)
            assert mixed_derivative_form(n, x, 0) == alt_power_sum(n, x, 2)

    def test_single_term_sums(self):
        assert alt_power_sum(0, 0, 4) == 1
        assert mixed_derivative_form(0, 0, 2) == 1

    def test_sweep_passes(self):
        reports = check_theorem_2_6_finite(4, 12, [Fraction(0), Fraction(1, 2)])
        assert reports and all(r.status == PASS for r in reports)

    def test_all_params_recorded(self):
        reports = check_theorem_2_6_finite(1, 2, [Fraction(0)])
        assert {tuple(sorted(r.params)) for r in reports} == {("n", "r", "x")}


class TestOtherChecks:
    def test_beta_equality(self):
        reports = check_beta_equality(15, [Fraction(0), Fraction(-49, 100)])
        assert all(r.status == PASS for r in reports)

    def test_lemma_a(self):
        reports = check_lemma_a(10, 4, [Fraction(0), Fraction(1, 2)])
        assert all(r.status == PASS for r in reports)

    def test_inversion_check(self):
        reports = check_inversion(count=50, max_len=24, n_max=15)
        assert all(r.status == PASS for r in reports)
        ids = {r.identity_id for r in reports}
        assert ids == {"inversion", "inversion-duality"}


class TestStandardSweepInvariant:
    def test_every_check_passes_on_the_standard_grid(self):
        xs = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3)]
        groups = [
            check_theorem_2_2(25, xs),
            check_theorem_2_3(25, xs),
            check_theorem_2_5(25, xs),
            check_theorem_2_6_finite(6, 25, xs),
            check_lemma_a(25, 6, xs),
            check_beta_equality(25, xs),
        ]
        for reports in groups:
            assert reports and all(r.status == PASS for r in reports)


class TestRunAll:
    def test_small_run_all_sorted_and_green(self):
        reports = run_all(
            n_max=6,
            r_max=2,
            x_samples=[Fraction(0), Fraction(1, 2)],
            inversion_count=40,
        )
        assert all(r.status == PASS for r in reports)
        keys = [r.sort_key() for r in reports]
        assert keys == sorted(keys)

    def test_single_worker_gives_same_reports(self):
        kwargs = dict(n_max=4, r_max=1, x_samples=[Fraction(0)], inversion_count=25)
        parallel = run_all(max_workers=4, **kwargs)
        serial = run_all(max_workers=1, **kwargs)
        strip = lambda rs: [(r.identity_id, tuple(sorted(r.params.items())), r.status) for r in rs]
        assert strip(parallel) == strip(serial)
