import math
import threading
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from harmonic_beta.beta_engine import (
    BellExpansion,
    BetaValue,
    alt_power_sum,
    bell_expansion,
    beta_F,
    beta_F_sum,
    derivative_F,
)
from harmonic_beta.harmonic_core import DomainError, harmonic_function, harmonic_vector

x_values = st.fractions(
    min_value=Fraction(-9, 10), max_value=Fraction(4), max_denominator=24
)

X_SAMPLES = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3), Fraction(-49, 100))


class TestBetaF:
    def test_x_zero_telescopes(self):
        for n in range(12):
            assert beta_F(n, 0) == Fraction(1, n + 1)

    def test_half(self):
        assert beta_F(1, Fraction(1, 2)) == Fraction(4, 15)

    def test_value_positive(self):
        assert beta_F(3, 0) == Fraction(1, 4)
        assert beta_F(6, Fraction(7, 3)) > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            beta_F(2, -1)
        with pytest.raises(DomainError):
            beta_F(2, Fraction(-101, 100))

    def test_beta_value_carrier(self):
        bv = BetaValue.compute(3, Fraction(1, 2))
        assert bv.n == 3 and bv.x == Fraction(1, 2)
        assert bv.value == beta_F(3, Fraction(1, 2))


class TestBetaFSum:
    def test_direct_arithmetic(self):
        assert beta_F_sum(2, 0) == 1 - Fraction(2, 2) + Fraction(1, 3)

    def test_single_term(self):
        x = Fraction(3, 7)
        assert beta_F_sum(0, x) == 1 / (x + 1)

    def test_agrees_with_product_both_routes(self):
        # both sides computed independently at a non-trivial point
        x = Fraction(1, 2)
        product = Fraction(math.factorial(5))
        for k in range(6):
            product /= x + k + 1
        assert beta_F_sum(5, x) == product == beta_F(5, x)

    @given(st.integers(0, 60), x_values)
    def test_product_sum_agreement(self, n, x):
        assert beta_F(n, x) == beta_F_sum(n, x)

    def test_product_sum_agreement_full_sweep(self):
        for n in range(61):
            for x in X_SAMPLES:
                assert beta_F(n, x) == beta_F_sum(n, x)


class TestAltPowerSum:
    def test_direct_summation_oracle(self):
        # independent oracle: expand the three terms by hand
        expected = 1 - Fraction(1, 2) + Fraction(1, 9)
        assert alt_power_sum(2, 0, 2) == expected == Fraction(11, 18)

    def test_r_one_is_beta(self):
        for n in range(8):
            for x in X_SAMPLES:
                assert alt_power_sum(n, x, 1) == beta_F(n, x)

    def test_single_term(self):
        assert alt_power_sum(0, 0, 5) == 1

    @given(st.integers(0, 40), x_values, st.integers(1, 6))
    def test_positive(self, n, x, r):
        assert alt_power_sum(n, x, r) > 0


class TestBellExpansion:
    def test_order_zero_is_constant_one(self):
        exp = bell_expansion(0)
        assert dict(exp.terms) == {(): 1}
        assert exp.evaluate([]) == 1

    def test_order_two(self):
        assert dict(bell_expansion(2).terms) == {(0, 1): 1, (2, 0): 1}

    def test_order_three(self):
        assert dict(bell_expansion(3).terms) == {
            (0, 0, 1): 2,
            (1, 1, 0): 3,
            (3, 0, 0): 1,
        }

    def test_order_four(self):
        assert dict(bell_expansion(4).terms) == {
            (0, 0, 0, 1): 6,
            (1, 0, 1, 0): 8,
            (0, 2, 0, 0): 3,
            (2, 1, 0, 0): 6,
            (4, 0, 0, 0): 1,
        }

    def test_grading_and_coefficient_sum(self):
        for r in range(13):
            exp = bell_expansion(r)
            for exponents, coeff in exp.terms.items():
                assert coeff > 0
                assert sum((i + 1) * e for i, e in enumerate(exponents)) == r
            assert exp.coefficient_sum() == math.factorial(r)

    def test_text_form(self):
        assert bell_expansion(0).text() == "1"
        assert bell_expansion(2).text() == "h2 + h1^2"
        assert bell_expansion(3).text() == "2*h3 + 3*h1*h2 + h1^3"
        assert (
            bell_expansion(4).text()
            == "6*h4 + 8*h1*h3 + 3*h2^2 + 6*h1^2*h2 + h1^4"
        )

    def test_text_is_stable(self):
        assert bell_expansion(5).text() == bell_expansion(5).text()

    def test_matches_complete_bell_recurrence_oracle(self):
        # independent symbolic route using the classic recurrence
        # B_{m+1} = sum_k C(m,k) B_{m-k} x_{k+1}, with x_a = (a-1)! h_a
        for r in range(9):
            assert _complete_bell_poly(r) == dict(bell_expansion(r).terms)

    def test_cache_returns_same_object(self):
        assert bell_expansion(6) is bell_expansion(6)

    def test_concurrent_construction_consistent(self):
        results = []

        def worker():
            results.append(bell_expansion(10).terms)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(dict(t) == dict(results[0]) for t in results)

    def test_evaluate_requires_enough_values(self):
        with pytest.raises(DomainError):
            bell_expansion(3).evaluate([Fraction(1)])


def _poly_mul(a: dict, b: dict, size: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(
                (ea[i] if i < len(ea) else 0) + (eb[i] if i < len(eb) else 0)
                for i in range(size)
            )
            out[key] = out.get(key, 0) + ca * cb
    return out


def _poly_add_into(target: dict, other: dict, factor: int, size: int) -> None:
    for e, c in other.items():
        key = tuple(e[i] if i < len(e) else 0 for i in range(size))
        target[key] = target.get(key, 0) + factor * c
        if target[key] == 0:
            del target[key]


def _complete_bell_poly(r: int) -> dict:
    """G_r via the complete-Bell recurrence on arguments (a-1)! h_a."""
    polys = [{(): 1}]
    for m in range(r):
        nxt: dict = {}
        for k in range(m + 1):
            gen = {tuple(1 if i == k else 0 for i in range(m + 1)): math.factorial(k)}
            product = _poly_mul(polys[m - k], gen, m + 1)
            _poly_add_into(nxt, product, math.comb(m, k), m + 1)
        polys.append(nxt)
    result = {
        tuple(e[i] if i < len(e) else 0 for i in range(r)): c
        for e, c in polys[r].items()
    }
    return result


class TestDerivativeF:
    def test_order_zero(self):
        for n in range(6):
            for x in X_SAMPLES:
                assert derivative_F(n, x, 0) == beta_F(n, x)

    def test_simple_pole_derivatives(self):
        # F_0(x) = 1/(x+1), so the r-th derivative at 0 is (-1)^r r!
        for r in range(10):
            expected = math.factorial(r) * (-1 if r % 2 else 1)
            assert derivative_F(0, 0, r) == expected

    def test_first_derivative_log_form(self):
        for n in range(8):
            for x in X_SAMPLES:
                expected = -harmonic_function(n, x, 1) * beta_F(n, x)
                assert derivative_F(n, x, 1) == expected

    @given(st.integers(0, 25), x_values, st.integers(0, 6))
    def test_closure_against_alternating_sum(self, n, x, r):
        rhs = math.factorial(r) * alt_power_sum(n, x, r + 1)
        if r % 2:
            rhs = -rhs
        assert derivative_F(n, x, r) == rhs

    @given(st.integers(0, 20), x_values, st.integers(0, 8))
    def test_sign_pattern(self, n, x, r):
        value = derivative_F(n, x, r)
        assert (value > 0) == (r % 2 == 0)

    def test_finite_difference_sanity(self):
        h = Fraction(1, 10**6)
        for n, x in [(2, Fraction(0)), (5, Fraction(1, 2)), (8, Fraction(7, 3))]:
            fd = float((beta_F(n, x + h) - beta_F(n, x)) / h)
            exact = float(derivative_F(n, x, 1))
            assert abs(fd - exact) / abs(exact) <= 1e-4

    def test_bell_route_equals_vector_evaluation(self):
        n, x, r = 7, Fraction(1, 2), 5
        expansion = bell_expansion(r)
        hvec = harmonic_vector(n, x, r)
        expected = -expansion.evaluate(hvec) * beta_F(n, x)
        assert derivative_F(n, x, r) == expected
