"""Partial sums with rigorous tail brackets for the infinite-series claims.

Exact mode sums rationals; the reported bracket [partial + tail_low,
partial + tail_high] always contains the true limit.  For the shifted power
sums the bracket comes from the integral comparison test.  For the
log-weight series (polynomials in harmonic numbers over n(n+1)) the tail is
bounded by capping every H^(alpha) with alpha >= 2 at a rational bound for
its limit, bounding H_{n+1} <= 1 + ln(n+1), and integrating the resulting
log-power envelope in closed form.  The published width is additionally run
through a running minimum over a fixed checkpoint lattice (powers of two and
three halves thereof), which makes bracket width provably non-increasing
in N.

Exact accumulation works over the natural common denominator: with
L = lcm(1..n+1), every weight-w monomial in the harmonic numbers is an
integer over L**w, and 1/(n(n+1)) = 1/n - 1/(n+1) keeps each whole term an
integer over L**(w+1).  That turns the hot loop into pure integer
arithmetic with a single reduction per reported value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .beta_engine import alt_power_sum, bell_expansion
from .harmonic_core import (
    DomainError,
    RationalLike,
    binomial,
    format_rational,
    zeta_even_coefficient,
)

__all__ = [
    "EXACT_N_MAX",
    "PiPower",
    "SeriesEstimate",
    "hurwitz_partial",
    "lemma_c_partial",
    "corollary_2_4_partial",
    "theorem_2_6_series",
    "multi_integral_exact",
]

#: Largest N for which the CLI runs exact rational accumulation by default.
EXACT_N_MAX = 10_000

Monomial = tuple[int, ...]
PolyTerms = Mapping[Monomial, int]


@dataclass(frozen=True)
class PiPower:
    """A limit of the form coeff * pi**exponent, kept symbolic."""

    coeff: Fraction
    exponent: int

    def to_float(self) -> float:
        return float(self.coeff) * math.pi**self.exponent


ClaimedLimit = Union[Fraction, PiPower, None]


@dataclass(frozen=True)
class SeriesEstimate:
    """Partial sum, rigorous tail bracket, and the claimed limit (if any)."""

    target_id: str
    N: int
    partial: Fraction | float
    exact: bool
    tail_low: Fraction
    tail_high: Fraction
    claimed_limit: ClaimedLimit = None

    def bracket(self) -> tuple[float, float]:
        """Bracket endpoints as floats."""
        if self.exact:
            return (
                float(self.partial + self.tail_low),
                float(self.partial + self.tail_high),
            )
        return (
            self.partial + float(self.tail_low),
            self.partial + float(self.tail_high),
        )

    def width(self) -> Fraction:
        return self.tail_high - self.tail_low

    def contains_claim(self, edge_tol: float = 1e-12) -> bool | None:
        """Whether the bracket contains the claimed limit; None when no claim.

        Rational claims against exact partials are decided exactly; pi-power
        claims are compared in floating point with ``edge_tol`` slack at the
        bracket edges.
        """
        if self.claimed_limit is None:
            return None
        if isinstance(self.claimed_limit, PiPower):
            lo, hi = self.bracket()
            value = self.claimed_limit.to_float()
            return lo - edge_tol <= value <= hi + edge_tol
        if self.exact:
            lo = self.partial + self.tail_low
            hi = self.partial + self.tail_high
            return lo <= self.claimed_limit <= hi
        lo, hi = self.bracket()
        return lo - edge_tol <= float(self.claimed_limit) <= hi + edge_tol

    def to_json_dict(self) -> dict:
        out: dict = {
            "target_id": self.target_id,
            "N": self.N,
            "partial": self.partial if not self.exact else format_rational(self.partial),
            "exact": self.exact,
            "tail_low": format_rational(self.tail_low),
            "tail_high": format_rational(self.tail_high),
        }
        if isinstance(self.claimed_limit, PiPower):
            out["claimed_limit"] = {
                "coeff": format_rational(self.claimed_limit.coeff),
                "pi_power": self.claimed_limit.exponent,
            }
        elif self.claimed_limit is not None:
            out["claimed_limit"] = format_rational(self.claimed_limit)
        return out


# -- shifted power sums -------------------------------------------------------


def hurwitz_partial(
    x: RationalLike, s: int, N: int, float_mode: bool = False, target_id: str | None = None
) -> SeriesEstimate:
    """Partial sum of sum(1/(n+x+1)**s, n >= 0) with an integral-test bracket.

    tail in [1/((s-1)(N+x+1)**(s-1)), 1/((s-1)(N+x)**(s-1))].
    """
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"hurwitz_partial requires x > -1, got x={x}")
    if s <= 1:
        raise DomainError(f"hurwitz_partial requires s >= 2 (divergent otherwise), got s={s}")
    if N < 1:
        raise DomainError(f"hurwitz_partial requires N >= 1, got N={N}")
    if target_id is None:
        target_id = f"zeta(x={format_rational(x)},s={s})"

    if float_mode:
        acc = _NeumaierSum()
        fx = float(x)
        for n in range(N):
            acc.add((n + fx + 1.0) ** -s)
        partial: Fraction | float = acc.total()
    else:
        terms = [1 / (x + n + 1) ** s for n in range(N)]
        partial = _tree_sum(terms)

    tail_low = 1 / (Fraction(s - 1) * (N + x + 1) ** (s - 1))
    tail_high = 1 / (Fraction(s - 1) * (N + x) ** (s - 1))
    claimed: ClaimedLimit = None
    if x == 0 and s % 2 == 0:
        claimed = PiPower(zeta_even_coefficient(s // 2), s)
    return SeriesEstimate(
        target_id=target_id,
        N=N,
        partial=partial,
        exact=not float_mode,
        tail_low=tail_low,
        tail_high=tail_high,
        claimed_limit=claimed,
    )


def _tree_sum(terms: list[Fraction]) -> Fraction:
    """Pairwise (balanced) exact summation; same value, far fewer big gcds."""
    if not terms:
        return Fraction(0)
    layer = terms
    while len(layer) > 1:
        nxt = [layer[i] + layer[i + 1] for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


class _NeumaierSum:
    """Compensated floating accumulation (fixed order, deterministic)."""

    def __init__(self) -> None:
        self._sum = 0.0
        self._comp = 0.0

    def add(self, value: float) -> None:
        t = self._sum + value
        if abs(self._sum) >= abs(value):
            self._comp += (self._sum - t) + value
        else:
            self._comp += (value - t) + self._sum
        self._sum = t

    def total(self) -> float:
        return self._sum + self._comp


# -- tail machinery for the log-weight series ---------------------------------

# Upper bound on ln 2; mantissa handled by ln m <= m - 1.
_LN2_UP = Fraction(6932, 10000)
# Upper bound on 1 + ln 3, covering 1 + ln(t+2) <= A + ln t for t >= 1.
_SHIFT_A = Fraction(21, 10)


def _log_upper(n: int) -> Fraction:
    """A rational upper bound on ln(n), monotone in n and tight to ~1%."""
    if n < 1:
        raise DomainError(f"_log_upper requires n >= 1, got {n}")
    bl = n.bit_length()
    return (bl - 1) * _LN2_UP + Fraction(n, 1 << (bl - 1)) - 1


@lru_cache(maxsize=None)
def _zeta_cap(alpha: int) -> Fraction:
    """Rational upper bound for the limit of H^(alpha): partial sum + integral tail."""
    if alpha < 2:
        raise DomainError(f"_zeta_cap requires alpha >= 2, got {alpha}")
    k0 = 40
    partial = sum((Fraction(1, k**alpha) for k in range(1, k0 + 1)), Fraction(0))
    return partial + Fraction(1, (alpha - 1) * k0 ** (alpha - 1))


def _log_moment_coefficients(poly_terms: PolyTerms, scale: Fraction) -> dict[int, Fraction]:
    """Collapse a positive harmonic polynomial to coefficients d_j of (1+ln(n+1))**j.

    Each generator h_alpha with alpha >= 2 is capped by its limit bound;
    the h_1 exponent becomes the log power j.
    """
    out: dict[int, Fraction] = {}
    for exponents, coeff in poly_terms.items():
        j = exponents[0] if exponents else 0
        d = Fraction(coeff) * scale
        for idx in range(1, len(exponents)):
            if exponents[idx]:
                d *= _zeta_cap(idx + 1) ** exponents[idx]
        out[j] = out.get(j, Fraction(0)) + d
    return out


def _raw_tail_bound(d_coeffs: Mapping[int, Fraction], M: int) -> Fraction:
    """Upper bound on sum(P_n/(n(n+1)), n > M) via the closed-form log integral.

    Uses sum_{n>M} (1+ln(n+1))**j/(n(n+1)) <= integral_M^inf (A+ln t)**j/t**2 dt
    = (1/M) * sum_i fall(j,i) * (A+ln M)**(j-i), with rational majorants for
    the logarithms.  Valid for M >= 1.
    """
    mu = _SHIFT_A + _log_upper(M)
    total = Fraction(0)
    for j, d in d_coeffs.items():
        poly = Fraction(0)
        falling = 1
        for i in range(j + 1):
            poly += falling * mu ** (j - i)
            falling *= j - i
        total += d * poly
    return total / M


def _checkpoint_lattice(n_max: int) -> set[int]:
    """{2**k} U {3 * 2**k} up to n_max; nested as n_max grows.

    Nesting is what makes the published bracket width non-increasing in N:
    the envelope minimum can only gain candidates.
    """
    points: set[int] = set()
    for start in (1, 3):
        v = start
        while v <= n_max:
            points.add(v)
            v *= 2
    return points


class _HarmonicNumerators:
    """H_m^(alpha) for alpha = 1..order as integer numerators over L**alpha.

    L is lcm(1..m); the state starts at m = 1 and advances one index at a
    time.  All updates are integer-only; the single gcd per step is against
    the small new index.
    """

    def __init__(self, order: int) -> None:
        self.order = order
        self.m = 1
        self.L = 1
        self.p = [1] * order  # p[i] is the numerator of H_m^(i+1) over L**(i+1)

    def advance(self) -> int:
        """Move m -> m+1; returns the factor g by which L grew (1 if none)."""
        m_new = self.m + 1
        g = m_new // math.gcd(self.L, m_new)
        self.L *= g
        q = self.L // m_new
        q_pow = 1
        g_pow = 1
        for i in range(self.order):
            q_pow *= q
            g_pow *= g
            self.p[i] = self.p[i] * g_pow + q_pow
        self.m = m_new
        return g


def _poly_weight(poly_terms: PolyTerms) -> int:
    weights = {
        sum((i + 1) * e for i, e in enumerate(exponents))
        for exponents in poly_terms
    }
    if len(weights) != 1:
        raise ValueError(f"polynomial is not weight-homogeneous: weights {sorted(weights)}")
    return weights.pop()


def _max_generator(poly_terms: PolyTerms) -> int:
    top = 0
    for exponents in poly_terms:
        for idx in range(len(exponents) - 1, -1, -1):
            if exponents[idx]:
                top = max(top, idx + 1)
                break
    return top


def _evaluate_int_poly(
    poly_terms: PolyTerms, powers: list[list[int]]
) -> int:
    """Evaluate an integer polynomial given per-generator power tables."""
    total = 0
    for exponents, coeff in poly_terms.items():
        prod = coeff
        for idx, e in enumerate(exponents):
            if e:
                prod *= powers[idx][e]
        total += prod
    return total


def _power_tables(
    values: list[int], max_exponents: list[int]
) -> list[list[int]]:
    tables: list[list[int]] = []
    for value, top in zip(values, max_exponents):
        row = [1]
        acc = 1
        for _ in range(top):
            acc *= value
            row.append(acc)
        tables.append(row)
    return tables


def _max_exponents(order: int, *polys: PolyTerms) -> list[int]:
    tops = [0] * order
    for poly in polys:
        for exponents in poly:
            for idx, e in enumerate(exponents):
                if e > tops[idx]:
                    tops[idx] = e
    return tops


def _log_weight_series(
    target_id: str,
    poly_terms: PolyTerms,
    scale: Fraction,
    N: int,
    claimed_limit: ClaimedLimit,
    sign: int = 1,
    crosscheck_terms: PolyTerms | None = None,
    float_mode: bool = False,
) -> SeriesEstimate:
    """sum(sign * scale * P(H_{n+1},...)/(n(n+1)), n = 1..N) with tail bracket.

    ``poly_terms`` must be weight-homogeneous with non-negative coefficients.
    When ``crosscheck_terms`` is given, both polynomials are evaluated on the
    same harmonic numerators at every n and must agree exactly; a mismatch
    raises ArithmeticError.
    """
    if N < 1:
        raise DomainError(f"series requires N >= 1, got N={N}")
    weight = _poly_weight(poly_terms)
    order = _max_generator(poly_terms)
    if crosscheck_terms is not None:
        if _poly_weight(crosscheck_terms) != weight:
            raise ValueError("crosscheck polynomial has a different weight")
        order = max(order, _max_generator(crosscheck_terms))
    d_coeffs = _log_moment_coefficients(poly_terms, scale)

    if float_mode:
        partial_f = _float_log_weight_partial(poly_terms, scale, N, order)
        width = _raw_tail_bound(d_coeffs, N)
        return _signed_estimate(
            target_id, N, partial_f, False, width, sign, claimed_limit
        )

    lattice = _checkpoint_lattice(N)
    candidates: list[tuple[Fraction, Fraction]] = []  # (partial_M, raw_M)
    partial: Fraction | None = None

    if weight == 0:
        # constant numerator: term is c/(n(n+1)), no harmonic state needed
        constant = sum(poly_terms.values())
        if crosscheck_terms is not None and sum(crosscheck_terms.values()) != constant:
            raise ArithmeticError(f"{target_id}: term routes disagree")
        running = Fraction(0)
        for n in range(1, N + 1):
            running += Fraction(constant, n) - Fraction(constant, n + 1)
            if n in lattice or n == N:
                snap = running * scale
                if n in lattice:
                    candidates.append((snap, _raw_tail_bound(d_coeffs, n)))
                if n == N:
                    partial = snap
    else:
        state = _HarmonicNumerators(order)
        max_exp = _max_exponents(
            order, poly_terms, *([crosscheck_terms] if crosscheck_terms else [])
        )
        acc = 0
        for n in range(1, N + 1):
            g = state.advance()
            if g != 1:
                acc *= g ** (weight + 1)
            powers = _power_tables(state.p, max_exp)
            value = _evaluate_int_poly(poly_terms, powers)
            if crosscheck_terms is not None:
                other = _evaluate_int_poly(crosscheck_terms, powers)
                if other != value:
                    raise ArithmeticError(f"{target_id}: term routes disagree at n={n}")
            acc += value * (state.L // n - state.L // (n + 1))
            if n in lattice or n == N:
                snap = Fraction(acc, state.L ** (weight + 1)) * scale
                if n in lattice:
                    candidates.append((snap, _raw_tail_bound(d_coeffs, n)))
                if n == N:
                    partial = snap
    assert partial is not None
    envelope = min(part + raw for part, raw in candidates)
    width = envelope - partial
    return _signed_estimate(target_id, N, partial, True, width, sign, claimed_limit)


def _float_log_weight_partial(
    poly_terms: PolyTerms, scale: Fraction, N: int, order: int
) -> float:
    h = [0.0] * (order + 1)  # h[alpha] tracks H_{m}^{(alpha)}, m = n+1
    for alpha in range(1, order + 1):
        h[alpha] = 1.0
    acc = _NeumaierSum()
    fscale = float(scale)
    for n in range(1, N + 1):
        m = n + 1
        inv = 1.0 / m
        p = inv
        for alpha in range(1, order + 1):
            h[alpha] += p
            p *= inv
        value = 0.0
        for exponents, coeff in poly_terms.items():
            prod = float(coeff)
            for idx, e in enumerate(exponents):
                if e:
                    prod *= h[idx + 1] ** e
            value += prod
        acc.add(fscale * value / (n * (n + 1)))
    return acc.total()


def _signed_estimate(
    target_id: str,
    N: int,
    partial: Fraction | float,
    exact: bool,
    width: Fraction,
    sign: int,
    claimed_limit: ClaimedLimit,
) -> SeriesEstimate:
    if sign >= 0:
        return SeriesEstimate(
            target_id, N, partial, exact, Fraction(0), width, claimed_limit
        )
    flipped = -partial if exact else -float(partial)
    return SeriesEstimate(
        target_id, N, flipped, exact, -width, Fraction(0), claimed_limit
    )


# -- the concrete series targets ----------------------------------------------


def lemma_c_partial(r: int, N: int, float_mode: bool = False) -> SeriesEstimate:
    """Partial sum of sum((1/n) * alt_power_sum(n, 0, r), n >= 1); limit r.

    Terms are evaluated through the closed form
    G_{r-1}(H_{n+1},...)/((r-1)! n(n+1)), which makes exact accumulation to
    N = 10**4 tractable.  For r = 1 the series telescopes to 1 - 1/(N+1).
    """
    if r < 1:
        raise DomainError(f"lemma_c_partial requires r >= 1, got r={r}")
    expansion = bell_expansion(r - 1)
    return _log_weight_series(
        target_id=f"lemma-c(r={r})",
        poly_terms=expansion.terms,
        scale=Fraction(1, math.factorial(r - 1)),
        N=N,
        claimed_limit=Fraction(r),
        float_mode=float_mode,
    )


_COROLLARY_DISPLAYS: dict[str, tuple[PolyTerms, int]] = {
    # display polynomial in H_{n+1}^{(alpha)} and the claimed limit
    "r3": ({(0, 1): 1, (2, 0): 1}, 6),
    "r4": ({(0, 0, 1): 2, (1, 1, 0): 3, (3, 0, 0): 1}, 24),
    "r5": (
        {
            (0, 0, 0, 1): 6,
            (1, 0, 1, 0): 8,
            (0, 2, 0, 0): 3,
            (2, 1, 0, 0): 6,
            (4, 0, 0, 0): 1,
        },
        120,
    ),
}


def corollary_2_4_partial(variant: str, N: int, float_mode: bool = False) -> SeriesEstimate:
    """Partial sum of a displayed harmonic-polynomial series over n(n+1).

    Variants ``r3``/``r4``/``r5`` claim the limits 3!, 4!, 5!.  The display
    numerator is hard-coded and checked term-by-term against the generic
    recursion route ((r-1)! times the lemma_c_partial terms).
    """
    if variant not in _COROLLARY_DISPLAYS:
        raise DomainError(
            f"unknown variant {variant!r}; expected one of {sorted(_COROLLARY_DISPLAYS)}"
        )
    display, limit = _COROLLARY_DISPLAYS[variant]
    r = int(variant[1:])
    recursion_route = bell_expansion(r - 1).terms if not float_mode else None
    return _log_weight_series(
        target_id=f"cor2.4-{variant}",
        poly_terms=display,
        scale=Fraction(1),
        N=N,
        claimed_limit=Fraction(limit),
        crosscheck_terms=recursion_route,
        float_mode=float_mode,
    )


def _leibniz_route_terms(r: int) -> PolyTerms:
    """sum_l C(r,l) l! h_{l+1} G_{r-l}, the product-rule route to G_{r+1}."""
    out: dict[Monomial, int] = {}
    for l in range(r + 1):
        c = math.comb(r, l) * math.factorial(l)
        for exponents, coeff in bell_expansion(r - l).terms.items():
            padded = list(exponents) + [0] * (r + 1 - len(exponents))
            padded[l] += 1
            key = tuple(padded)
            out[key] = out.get(key, 0) + c * coeff
    return out


def _derivative_route_terms(r: int, x: Fraction, count: int) -> list[Fraction]:
    """b_k for k < count: the mixed harmonic/derivative form of the finite
    identity, evaluated incrementally (shared harmonic state, F recurrence).

    Each b_k is checked exactly against the direct alternating power sum;
    a mismatch raises ArithmeticError.
    """
    expansions = [bell_expansion(j) for j in range(r + 1)]
    fact = [math.factorial(j) for j in range(r + 2)]
    h: list[Fraction] = []
    base = 1 / (x + 1)
    power = Fraction(1)
    for _ in range(r + 2):
        power *= base
        h.append(power)
    f_k = base  # F_0(x)
    out: list[Fraction] = []
    for k in range(count):
        if k > 0:
            inv = 1 / (x + k + 1)
            f_k *= k * inv
            power = Fraction(1)
            for alpha in range(r + 2):
                power *= inv
                h[alpha] += power
        derivs = [expansions[j].evaluate(h) * f_k for j in range(r + 1)]
        acc = Fraction(0)
        for l in range(r + 1):
            # (-1)^l from the harmonic derivative, (-1)^(r-l) from F^(r-l)
            term = math.comb(r, l) * fact[l] * h[l] * derivs[r - l]
            acc += term
        b_k = acc / fact[r + 1]
        direct = alt_power_sum(k, x, r + 2)
        if b_k != direct:
            raise ArithmeticError(
                f"derivative route disagrees with direct summation at k={k}"
            )
        out.append(b_k)
    return out


def theorem_2_6_series(
    r: int,
    x: RationalLike,
    N: int,
    float_mode: bool = False,
    term_check_cap: int | None = None,
    inversion_check_cap: int = 128,
) -> tuple[SeriesEstimate, SeriesEstimate]:
    """The two infinite forms of the general-order identity.

    The first estimate is the double sum whose inner bracket, by the finite
    identity, collapses term-by-term to 1/(n+x+1)**(r+2).  In exact mode the
    collapse is verified index by index (derivative route against direct
    alternating summation, for every index below ``term_check_cap``, default
    all of them) and the binomial inversion is additionally re-done head-on
    for n below ``inversion_check_cap``; the partial sum then equals the
    shifted power sum and is bracketed exactly like it.

    The second estimate is the x = 0 series with claimed limit
    (-1)**r (r+2)!, evaluated through the recursion route and cross-checked
    term-by-term against the product-rule route.
    """
    if r < 0:
        raise DomainError(f"theorem_2_6_series requires r >= 0, got r={r}")
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"theorem_2_6_series requires x > -1, got x={x}")
    if N < 1:
        raise DomainError(f"theorem_2_6_series requires N >= 1, got N={N}")

    eq31_id = f"eq31(r={r},x={format_rational(x)})"
    if not float_mode:
        checked = N if term_check_cap is None else min(N, term_check_cap)
        inner = _derivative_route_terms(r, x, checked)
        for n in range(min(checked, inversion_check_cap)):
            recovered = Fraction(0)
            s = 1
            for k in range(n + 1):
                recovered += s * binomial(n, k) * inner[k]
                s = -s
            if recovered != 1 / (x + n + 1) ** (r + 2):
                raise ArithmeticError(f"{eq31_id}: inversion mismatch at n={n}")
    base = hurwitz_partial(x, r + 2, N, float_mode=float_mode, target_id=eq31_id)

    sign = -1 if r % 2 else 1
    eq32 = _log_weight_series(
        target_id=f"eq32(r={r})",
        poly_terms=bell_expansion(r + 1).terms,
        scale=Fraction(1),
        N=N,
        claimed_limit=Fraction(sign * math.factorial(r + 2)),
        sign=sign,
        crosscheck_terms=None if float_mode else _leibniz_route_terms(r),
        float_mode=float_mode,
    )
    return base, eq32


def multi_integral_exact(n: int, r: int) -> Fraction:
    """The r-cube integral of (1 - x_1*...*x_r)**n, exactly.

    Expanding the power reduces it to alt_power_sum(n, 0, r); this is the
    exact reference for the Monte Carlo estimator.
    """
    if n < 0:
        raise DomainError(f"multi_integral_exact requires n >= 0, got n={n}")
    if r < 1:
        raise DomainError(f"multi_integral_exact requires r >= 1, got r={r}")
    return alt_power_sum(n, 0, r)
