"""Exact rational arithmetic and the fundamental number families.

Everything here is built on :class:`fractions.Fraction`, which already
guarantees the two invariants we need from a rational scalar: the stored
value is always reduced (gcd of numerator and denominator is 1) and the
denominator is always positive.  The canonical text form is ``"p/q"`` with
the denominator omitted when it equals 1 (``"11/6"``, ``"-1/30"``, ``"5"``),
which is exactly what ``str(Fraction)`` produces; :func:`parse_rational`
accepts only that form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

RationalLike = Union[Fraction, int]

__all__ = [
    "DomainError",
    "HarmonicVector",
    "BernoulliTable",
    "parse_rational",
    "format_rational",
    "binomial",
    "harmonic_number",
    "harmonic_function",
    "harmonic_vector",
    "bernoulli_table",
    "zeta_even_coefficient",
]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse the canonical ``"p/q"`` form (sign on p only, no decimals)."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise DomainError(f"not a p/q rational: {text!r}")
    return Fraction(text)


def format_rational(value: RationalLike) -> str:
    """Canonical ``"p/q"`` text, denominator omitted when it is 1."""
    return str(Fraction(value))


def binomial(n: int, k: int) -> int:
    """C(n, k) with the convention that out-of-range k gives 0."""
    if n < 0:
        raise DomainError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def harmonic_number(n: int, alpha: int) -> Fraction:
    """Generalized harmonic number: sum of 1/k**alpha for k = 1..n (0 for n = 0)."""
    if n < 0:
        raise DomainError(f"harmonic_number requires n >= 0, got n={n}")
    if alpha < 1:
        raise DomainError(f"harmonic_number requires alpha >= 1, got alpha={alpha}")
    return sum((Fraction(1, k**alpha) for k in range(1, n + 1)), Fraction(0))


def _check_shift(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"requires x > -1, got x={x}")
    return x


def harmonic_function(n: int, x: RationalLike, alpha: int) -> Fraction:
    """Shifted power sum: sum of 1/(k+x+1)**alpha for k = 0..n, exact.

    At x = 0 this equals ``harmonic_number(n + 1, alpha)``.
    """
    if n < 0:
        raise DomainError(f"harmonic_function requires n >= 0, got n={n}")
    if alpha < 1:
        raise DomainError(f"harmonic_function requires alpha >= 1, got alpha={alpha}")
    x = _check_shift(x)
    return sum(
        (Fraction(1, 1) / (k + x + 1) ** alpha for k in range(n + 1)), Fraction(0)
    )


@dataclass(frozen=True)
class HarmonicVector:
    """The tuple (H_n(x,1), ..., H_n(x,r)) for fixed n and shift x.

    All entries are strictly positive because every base k+x+1 is
    positive on the domain x > -1.
    """

    n: int
    x: Fraction
    values: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.values)

    def value(self, alpha: int) -> Fraction:
        """Entry for exponent alpha (1-based)."""
        return self.values[alpha - 1]


def harmonic_vector(n: int, x: RationalLike, r: int) -> HarmonicVector:
    """All of H_n(x,1)..H_n(x,r) in one pass over the shared bases k+x+1."""
    if n < 0:
        raise DomainError(f"harmonic_vector requires n >= 0, got n={n}")
    if r < 1:
        raise DomainError(f"harmonic_vector requires r >= 1, got r={r}")
    x = _check_shift(x)
    totals = [Fraction(0)] * r
    for k in range(n + 1):
        inv = Fraction(1, 1) / (k + x + 1)
        power = inv
        for i in range(r):
            totals[i] += power
            power *= inv
    return HarmonicVector(n=n, x=x, values=tuple(totals))


@dataclass(frozen=True)
class BernoulliTable:
    """Bernoulli numbers B_0..B_N (convention B_1 = -1/2)."""

    values: tuple[Fraction, ...]

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)


def bernoulli_table(n_max: int) -> BernoulliTable:
    """B_0..B_N from the recurrence sum(C(n+1,k)*B_k, k=0..n) = 0, B_0 = 1."""
    if n_max < 0:
        raise DomainError(f"bernoulli_table requires N >= 0, got N={n_max}")
    values: list[Fraction] = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * values[k]
        values.append(-acc / (n + 1))
    return BernoulliTable(values=tuple(values))


def zeta_even_coefficient(n: int) -> Fraction:
    """The rational c with zeta(2n) = c * pi**(2n).

    c = (-1)**(n+1) * B_{2n} * 2**(2n) / (2 * (2n)!); always positive.
    """
    if n < 1:
        raise DomainError(f"zeta_even_coefficient requires n >= 1, got n={n}")
    b = bernoulli_table(2 * n)[2 * n]
    sign = 1 if n % 2 == 1 else -1
    return sign * b * Fraction(2 ** (2 * n), 2 * math.factorial(2 * n))


def as_fraction_sequence(values: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Normalize a sequence of ints/Fractions to a Fraction tuple."""
    return tuple(Fraction(v) for v in values)
