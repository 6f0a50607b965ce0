import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_beta.harmonic_core import (
    DomainError,
    bernoulli_table,
    binomial,
    format_rational,
    harmonic_function,
    harmonic_number,
    harmonic_vector,
    parse_rational,
    zeta_even_coefficient,
)

x_values = st.fractions(
    min_value=Fraction(-9, 10), max_value=Fraction(5), max_denominator=30
)


class TestBinomial:
    def test_small_entries(self):
        assert binomial(5, 2) == 10
        assert binomial(7, 0) == 1
        assert binomial(4, 6) == 0
        assert binomial(3, -1) == 0

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            binomial(-1, 0)

    @given(st.integers(0, 80), st.integers(-5, 85))
    def test_matches_math_comb(self, n, k):
        expected = math.comb(n, k) if 0 <= k <= n else 0
        assert binomial(n, k) == expected

    @given(st.integers(1, 60), st.integers(0, 60))
    def test_pascal_recurrence(self, n, k):
        assert binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1)


class TestHarmonicNumber:
    def test_empty_sum_is_zero(self):
        assert harmonic_number(0, 3) == 0

    def test_small_values(self):
        assert harmonic_number(3, 1) == Fraction(11, 6)
        assert harmonic_number(2, 2) == Fraction(5, 4)

    def test_alpha_zero_rejected(self):
        with pytest.raises(DomainError):
            harmonic_number(3, 0)

    @given(st.integers(1, 120), st.integers(1, 5))
    def test_telescoping(self, n, alpha):
        delta = harmonic_number(n, alpha) - harmonic_number(n - 1, alpha)
        assert delta == Fraction(1, n**alpha)


class TestHarmonicFunction:
    def test_single_term(self):
        assert harmonic_function(0, Fraction(1, 2), 2) == Fraction(4, 9)

    def test_direct_summation(self):
        # 1/2 + 1/3 + 1/4 at x = 1
        assert harmonic_function(2, 1, 1) == Fraction(13, 12)

    @given(st.integers(0, 60), st.integers(1, 6))
    def test_shift_identity(self, n, alpha):
        assert harmonic_function(n, 0, alpha) == harmonic_number(n + 1, alpha)

    @given(st.integers(1, 40), x_values, st.integers(1, 4))
    def test_telescoping(self, n, x, alpha):
        delta = harmonic_function(n, x, alpha) - harmonic_function(n - 1, x, alpha)
        assert delta == 1 / (n + x + 1) ** alpha

    @given(st.integers(0, 30), x_values, st.integers(1, 4))
    def test_positive_and_reduced(self, n, x, alpha):
        value = harmonic_function(n, x, alpha)
        assert value > 0
        assert math.gcd(value.numerator, value.denominator) == 1
        assert value.denominator > 0

    def test_domain_boundary_rejected(self):
        with pytest.raises(DomainError):
            harmonic_function(2, -1, 1)
        with pytest.raises(DomainError):
            harmonic_function(2, Fraction(-3, 2), 1)


class TestHarmonicVector:
    def test_batch_matches_scalar(self):
        vec = harmonic_vector(1, 0, 2)
        assert vec.values == (Fraction(3, 2), Fraction(5, 4))

    def test_single_unit_term(self):
        assert harmonic_vector(0, 0, 3).values == (1, 1, 1)

    def test_first_entry_direct_summation_oracle(self):
        # independent oracle: sum the bases explicitly
        expected = Fraction(2, 3) + Fraction(2, 5) + Fraction(2, 7)
        vec = harmonic_vector(2, Fraction(1, 2), 1)
        assert vec.values[0] == expected
        assert vec.values[0] == Fraction(142, 105)

    @given(st.integers(0, 25), x_values, st.integers(1, 5))
    def test_agrees_with_harmonic_function(self, n, x, r):
        vec = harmonic_vector(n, x, r)
        assert vec.order == r
        for alpha in range(1, r + 1):
            assert vec.value(alpha) == harmonic_function(n, x, alpha)


def _akiyama_tanigawa(n: int) -> list[Fraction]:
    """Independent route to the Bernoulli numbers ("second" kind: B1 = +1/2)."""
    row = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        out.append(row[0])
    return out


class TestBernoulli:
    def test_displayed_coefficients(self):
        table = bernoulli_table(8)
        assert table[1] == Fraction(-1, 2)
        assert table[2] == Fraction(1, 6)
        assert table[4] == Fraction(-1, 30)
        assert table[6] == Fraction(1, 42)
        assert table[8] == Fraction(-1, 30)

    def test_odd_indices_vanish(self):
        table = bernoulli_table(41)
        for k in range(1, 21):
            assert table[2 * k + 1] == 0

    def test_against_akiyama_tanigawa_oracle(self):
        table = bernoulli_table(24)
        oracle = _akiyama_tanigawa(24)
        for k, value in enumerate(table.values):
            expected = -oracle[k] if k == 1 else oracle[k]
            assert value == expected

    def test_defining_recurrence(self):
        table = bernoulli_table(30)
        for n in range(1, 30):
            total = sum(
                math.comb(n + 1, k) * table[k] for k in range(n + 1)
            )
            assert total == 0


class TestZetaEvenCoefficient:
    def test_displayed_values(self):
        assert zeta_even_coefficient(1) == Fraction(1, 6)
        assert zeta_even_coefficient(2) == Fraction(1, 90)
        assert zeta_even_coefficient(3) == Fraction(1, 945)
        assert zeta_even_coefficient(4) == Fraction(1, 9450)

    def test_always_positive(self):
        for n in range(1, 21):
            assert zeta_even_coefficient(n) > 0

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            zeta_even_coefficient(0)


class TestRationalText:
    def test_format(self):
        assert format_rational(Fraction(11, 6)) == "11/6"
        assert format_rational(Fraction(-1, 30)) == "-1/30"
        assert format_rational(Fraction(5)) == "5"

    def test_parse(self):
        assert parse_rational("11/6") == Fraction(11, 6)
        assert parse_rational("-1/30") == Fraction(-1, 30)
        assert parse_rational("5") == Fraction(5)

    @pytest.mark.parametrize("bad", ["0.5", "1e3", "1/-2", " 1/2", "1/2 ", "a/b", ""])
    def test_rejects_non_canonical(self, bad):
        with pytest.raises(DomainError):
            parse_rational(bad)

    @given(st.fractions(max_denominator=10**9))
    def test_roundtrip(self, q):
        assert parse_rational(format_rational(q)) == q
