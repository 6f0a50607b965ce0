"""The beta-integral family F_n(x) = B(x+1, n+1) and its derivatives.

For integer n >= 0 the value is the rational product
``n! / ((x+1)(x+2)...(x+n+1))``, so everything stays exact.  The r-th
x-derivative satisfies

    F_n^(r)(x) = (-1)**r * G_r(H_n(x,1), ..., H_n(x,r)) * F_n(x)

where G_r is an integer polynomial in formal generators h_1..h_r produced by
the recursion

    G_0 = 1,    G_{r+1} = h_1*G_r + sum(alpha * h_{alpha+1} * dG_r/dh_alpha).

The recursion mirrors repeated differentiation: each derivative multiplies by
-h_1 (logarithmic derivative of F_n) and bumps each h_alpha to
-alpha*h_{alpha+1}.  Equivalently G_r is the complete Bell polynomial
evaluated at (0!*h_1, 1!*h_2, ..., (r-1)!*h_r); the recursion above is the
normative definition here.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .harmonic_core import (
    DomainError,
    HarmonicVector,
    RationalLike,
    binomial,
    harmonic_vector,
)

__all__ = [
    "BellExpansion",
    "BetaValue",
    "beta_F",
    "beta_F_sum",
    "alt_power_sum",
    "bell_expansion",
    "derivative_F",
]

Monomial = tuple[int, ...]


def _graded_lex_key(exponents: Monomial) -> tuple[int, tuple[int, ...]]:
    # ascending total degree, then h1 > h2 > ... within a degree
    return (sum(exponents), tuple(-e for e in exponents))


@dataclass(frozen=True)
class BellExpansion:
    """Integer-coefficient polynomial in formal generators h_1..h_r.

    ``terms`` maps exponent vectors (e_1, ..., e_r) to positive integer
    coefficients, stored in graded-lex order so that iteration and the text
    form are byte-stable.  Every monomial has weight sum(alpha*e_alpha) = r
    and the coefficients sum to r!.
    """

    order: int
    terms: Mapping[Monomial, int]

    def evaluate(self, values: HarmonicVector | Sequence[RationalLike]) -> Fraction:
        """Substitute h_alpha = values[alpha-1] and evaluate exactly."""
        if isinstance(values, HarmonicVector):
            values = values.values
        if len(values) < self.order:
            raise DomainError(
                f"expansion of order {self.order} needs {self.order} generator "
                f"values, got {len(values)}"
            )
        total = Fraction(0)
        for exponents, coeff in self.terms.items():
            term = Fraction(coeff)
            for alpha_idx, e in enumerate(exponents):
                if e:
                    term *= Fraction(values[alpha_idx]) ** e
            total += term
        return total

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def text(self) -> str:
        """Render like ``"2*h3 + 3*h1*h2 + h1^3"`` (graded-lex term order)."""
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exponents, coeff in self.terms.items():
            factors: list[str] = []
            for alpha_idx, e in enumerate(exponents):
                if e == 1:
                    factors.append(f"h{alpha_idx + 1}")
                elif e > 1:
                    factors.append(f"h{alpha_idx + 1}^{e}")
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.text()


_expansion_cache: dict[int, BellExpansion] = {0: BellExpansion(0, {(): 1})}
_expansion_lock = threading.Lock()


def _step(terms: Mapping[Monomial, int], r: int) -> dict[Monomial, int]:
    """One application of G -> h1*G + sum(alpha * h_{alpha+1} * dG/dh_alpha)."""
    out: dict[Monomial, int] = {}

    def add(exponents: Monomial, coeff: int) -> None:
        out[exponents] = out.get(exponents, 0) + coeff

    for exponents, coeff in terms.items():
        padded = exponents + (0,) * (r + 1 - len(exponents))
        bumped = list(padded)
        bumped[0] += 1
        add(tuple(bumped), coeff)
        for alpha_idx in range(r):
            e = padded[alpha_idx]
            if not e:
                continue
            shifted = list(padded)
            shifted[alpha_idx] -= 1
            shifted[alpha_idx + 1] += 1
            add(tuple(shifted), coeff * e * (alpha_idx + 1))
    return out


def bell_expansion(r: int) -> BellExpansion:
    """The order-r expansion G_r, cached per r (write-once, thread-safe)."""
    if r < 0:
        raise DomainError(f"bell_expansion requires r >= 0, got r={r}")
    cached = _expansion_cache.get(r)
    if cached is not None:
        return cached
    with _expansion_lock:
        top = max(_expansion_cache)
        terms = dict(_expansion_cache[top].terms)
        for k in range(top, r):
            terms = _step(terms, k)
            ordered = dict(sorted(terms.items(), key=lambda kv: _graded_lex_key(kv[0])))
            _expansion_cache.setdefault(k + 1, BellExpansion(k + 1, ordered))
            terms = ordered
        return _expansion_cache[r]


@dataclass(frozen=True)
class BetaValue:
    """F_n(x) together with the parameters that produced it."""

    n: int
    x: Fraction
    value: Fraction

    @classmethod
    def compute(cls, n: int, x: RationalLike) -> "BetaValue":
        x = Fraction(x)
        return cls(n=n, x=x, value=beta_F(n, x))


def beta_F(n: int, x: RationalLike) -> Fraction:
    """F_n(x) as the exact product n! / ((x+1)(x+2)...(x+n+1))."""
    if n < 0:
        raise DomainError(f"beta_F requires n >= 0, got n={n}")
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"beta_F requires x > -1, got x={x}")
    denom = Fraction(1)
    for k in range(n + 1):
        denom *= x + k + 1
    return Fraction(math.factorial(n)) / denom


def beta_F_sum(n: int, x: RationalLike) -> Fraction:
    """F_n(x) as the alternating binomial sum over 1/(x+k+1).

    Equals :func:`beta_F` exactly; kept as an independent route.
    """
    return alt_power_sum(n, x, 1)


def alt_power_sum(n: int, x: RationalLike, r: int) -> Fraction:
    """sum(C(n,k) * (-1)**k / (x+k+1)**r, k = 0..n), exact."""
    if n < 0:
        raise DomainError(f"alt_power_sum requires n >= 0, got n={n}")
    if r < 1:
        raise DomainError(f"alt_power_sum requires r >= 1, got r={r}")
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"alt_power_sum requires x > -1, got x={x}")
    total = Fraction(0)
    sign = 1
    for k in range(n + 1):
        total += sign * binomial(n, k) / (x + k + 1) ** r
        sign = -sign
    return total


def derivative_F(n: int, x: RationalLike, r: int) -> Fraction:
    """Exact r-th derivative of F_n at x.

    Computed as (-1)**r * G_r(H_n(x,1),...,H_n(x,r)) * F_n(x); agrees with
    r! * (-1)**r * alt_power_sum(n, x, r+1) for every n, x, r.
    """
    if r < 0:
        raise DomainError(f"derivative_F requires r >= 0, got r={r}")
    base = beta_F(n, x)
    if r == 0:
        return base
    expansion = bell_expansion(r)
    hvec = harmonic_vector(n, x, r)
    value = expansion.evaluate(hvec) * base
    return -value if r % 2 else value
