"""Exact verification of the finite identity catalog over parameter sweeps.

Each check evaluates both sides of an identity at every point of a parameter
grid and emits one :class:`IdentityReport` per point.  Failures are recorded
with witnesses rather than raised, so a sweep always runs to completion.
The display polynomials checked here are written out with their literal
coefficients on purpose: the generic Bell recursion is exercised elsewhere,
and hard-coding the displays keeps the two routes independent.

Identity ids are stable catalog keys (``"thm2.2a"``, ``"eq16"``, ...) used in
JSON/CSV reports and by the CLI.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .beta_engine import alt_power_sum, beta_F, beta_F_sum, derivative_F
from .harmonic_core import (
    DomainError,
    RationalLike,
    binomial,
    harmonic_function,
    harmonic_number,
)

__all__ = [
    "IdentityReport",
    "DEFAULT_X_SAMPLES",
    "binomial_inverse",
    "generic_check",
    "check_theorem_2_2",
    "check_theorem_2_3",
    "check_theorem_2_5",
    "check_theorem_2_6_finite",
    "check_beta_equality",
    "check_lemma_a",
    "check_inversion",
    "deliberate_mismatch_check",
    "run_all",
]

#: Default x sweep: the standard sample points plus one near the x = -1 boundary.
DEFAULT_X_SAMPLES: tuple[Fraction, ...] = (
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(7, 3),
    Fraction(-49, 100),
)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class IdentityReport:
    """Machine-readable verdict for one identity at one parameter tuple."""

    identity_id: str
    params: dict
    status: str
    witness: tuple[Fraction, Fraction] | None = None
    reason: str | None = None
    elapsed_ms: int = 0
    oracle: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def sort_key(self) -> tuple:
        return (
            self.identity_id,
            self.params.get("r", -1),
            self.params.get("n", -1),
            Fraction(self.params.get("x", 0)),
        )


def binomial_inverse(sequence: Sequence[RationalLike]) -> list[Fraction]:
    """Alternating binomial transform b_n = sum(C(n,k)*(-1)**k*a_k).

    The transform is an involution: applying it twice returns the input.
    Output entry n depends only on input entries 0..n.
    """
    values = [Fraction(v) for v in sequence]
    out: list[Fraction] = []
    for n in range(len(values)):
        acc = Fraction(0)
        sign = 1
        for k in range(n + 1):
            acc += sign * binomial(n, k) * values[k]
            sign = -sign
        out.append(acc)
    return out


Evaluator = Callable[..., Fraction]


def generic_check(
    identity_id: str,
    lhs: Evaluator,
    rhs: Evaluator,
    grid: Iterable[Mapping[str, object]],
) -> list[IdentityReport]:
    """Exact lhs == rhs comparison at every grid point.

    Precondition violations (:class:`DomainError`) become skipped entries
    with a reason instead of aborting the sweep.
    """
    reports: list[IdentityReport] = []
    for params in grid:
        params = dict(params)
        start = time.perf_counter()
        try:
            left = lhs(**params)
            right = rhs(**params)
        except DomainError as exc:
            elapsed = int((time.perf_counter() - start) * 1000)
            reports.append(
                IdentityReport(identity_id, params, SKIPPED, reason=str(exc), elapsed_ms=elapsed)
            )
            continue
        elapsed = int((time.perf_counter() - start) * 1000)
        if left == right:
            reports.append(IdentityReport(identity_id, params, PASS, elapsed_ms=elapsed))
        else:
            reports.append(
                IdentityReport(
                    identity_id, params, FAIL, witness=(left, right), elapsed_ms=elapsed
                )
            )
    return reports


def _grid_nx(n_max: int, x_samples: Sequence[RationalLike]) -> list[dict]:
    return [{"n": n, "x": Fraction(x)} for x in x_samples for n in range(n_max + 1)]


def _grid_n(n_max: int) -> list[dict]:
    return [{"n": n} for n in range(n_max + 1)]


# -- display polynomials with their literal coefficients ---------------------


def _poly_r2(h1: Fraction, h2: Fraction) -> Fraction:
    return h2 + h1 * h1


def _poly_r3(h1: Fraction, h2: Fraction, h3: Fraction) -> Fraction:
    return 2 * h3 + 3 * h1 * h2 + h1 ** 3


def _poly_r4(h1: Fraction, h2: Fraction, h3: Fraction, h4: Fraction) -> Fraction:
    return 6 * h4 + 8 * h3 * h1 + 3 * h2 * h2 + 6 * h1 * h1 * h2 + h1 ** 4


def _h(n: int, x: RationalLike, alpha: int) -> Fraction:
    return harmonic_function(n, x, alpha)


def _harmonic_rows(
    n_max: int, x: RationalLike, order: int
) -> tuple[list[list[Fraction]], list[Fraction]]:
    """h[alpha-1][k] = H_k(x, alpha) and f[k] = F_k(x) for k = 0..n_max.

    Built incrementally so that whole-row checks stay quadratic overall.
    """
    x = Fraction(x)
    if x <= -1:
        raise DomainError(f"requires x > -1, got x={x}")
    h: list[list[Fraction]] = [[] for _ in range(order)]
    f: list[Fraction] = []
    totals = [Fraction(0)] * order
    f_val = Fraction(1)
    for k in range(n_max + 1):
        inv = 1 / (x + k + 1)
        f_val *= k * inv if k else inv
        power = Fraction(1)
        for alpha in range(order):
            power *= inv
            totals[alpha] += power
            h[alpha].append(totals[alpha])
        f.append(f_val)
    return h, f


def _indexed(values: Sequence[Fraction]) -> Evaluator:
    return lambda n, **_ignored: values[n]


def check_theorem_2_2(
    n_max: int = 50, x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES
) -> list[IdentityReport]:
    """First-order family: forward forms and their binomial inversions.

    eq15     : alt_power_sum(n,x,2) == H_n(x,1)*F_n(x)
    eq16     : alt_power_sum(n,0,2) == H_{n+1}/(n+1)
    thm2.2a  : sum C(n,k)(-1)^k H_k(x,1) F_k(x) == 1/(n+x+1)^2
    thm2.2b  : sum C(n,k)(-1)^k H_{k+1}/(k+1) == 1/(n+1)^2
    """
    reports: list[IdentityReport] = []
    for x in [Fraction(v) for v in x_samples]:
        h, f = _harmonic_rows(n_max, x, 1)
        forward = [h[0][k] * f[k] for k in range(n_max + 1)]
        reports += generic_check(
            "eq15",
            lambda n, x: alt_power_sum(n, x, 2),
            lambda n, x, _row=forward: _row[n],
            _grid_nx(n_max, [x]),
        )
        inverted = binomial_inverse(forward)
        reports += generic_check(
            "thm2.2a",
            lambda n, x, _row=inverted: _row[n],
            lambda n, x: 1 / (Fraction(x) + n + 1) ** 2,
            _grid_nx(n_max, [x]),
        )
    h0, _ = _harmonic_rows(n_max, 0, 1)
    forward0 = [h0[0][k] / (k + 1) for k in range(n_max + 1)]
    reports += generic_check(
        "eq16",
        lambda n: alt_power_sum(n, 0, 2),
        _indexed(forward0),
        _grid_n(n_max),
    )
    reports += generic_check(
        "thm2.2b",
        _indexed(binomial_inverse(forward0)),
        lambda n: Fraction(1, (n + 1) ** 2),
        _grid_n(n_max),
    )
    return reports


def check_theorem_2_3(
    n_max: int = 50, x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES
) -> list[IdentityReport]:
    """Second/third-order family.

    thm2.3a  : (H_n(x,2)+H_n(x,1)^2) F_n(x) == 2! alt_power_sum(n,x,3)
    thm2.3b  : (2H_n(x,3)+3H_n(x,1)H_n(x,2)+H_n(x,1)^3) F_n(x) == 3! aps(n,x,4)
    thm2.3c  : x=0 form of thm2.3a
    thm2.3d  : x=0 form of thm2.3b
    eq20     : inverted thm2.3a == 1/(x+n+1)^3
    eq21     : inverted thm2.3b == 1/(x+n+1)^4
    """
    reports: list[IdentityReport] = []
    for x in [Fraction(v) for v in x_samples]:
        h, f = _harmonic_rows(n_max, x, 3)
        d2 = [_poly_r2(h[0][k], h[1][k]) * f[k] for k in range(n_max + 1)]
        d3 = [_poly_r3(h[0][k], h[1][k], h[2][k]) * f[k] for k in range(n_max + 1)]
        reports += generic_check(
            "thm2.3a",
            lambda n, x, _row=d2: _row[n],
            lambda n, x: 2 * alt_power_sum(n, x, 3),
            _grid_nx(n_max, [x]),
        )
        reports += generic_check(
            "thm2.3b",
            lambda n, x, _row=d3: _row[n],
            lambda n, x: 6 * alt_power_sum(n, x, 4),
            _grid_nx(n_max, [x]),
        )
        inv2 = binomial_inverse(d2)
        inv3 = binomial_inverse(d3)
        reports += generic_check(
            "eq20",
            lambda n, x, _row=inv2: _row[n] / 2,
            lambda n, x: 1 / (Fraction(x) + n + 1) ** 3,
            _grid_nx(n_max, [x]),
        )
        reports += generic_check(
            "eq21",
            lambda n, x, _row=inv3: _row[n] / 6,
            lambda n, x: 1 / (Fraction(x) + n + 1) ** 4,
            _grid_nx(n_max, [x]),
        )
    h0, _ = _harmonic_rows(n_max, 0, 3)
    reports += generic_check(
        "thm2.3c",
        lambda n: 2 * alt_power_sum(n, 0, 3),
        lambda n: _poly_r2(h0[0][n], h0[1][n]) / (n + 1),
        _grid_n(n_max),
    )
    reports += generic_check(
        "thm2.3d",
        lambda n: 6 * alt_power_sum(n, 0, 4),
        lambda n: _poly_r3(h0[0][n], h0[1][n], h0[2][n]) / (n + 1),
        _grid_n(n_max),
    )
    return reports


def check_theorem_2_5(
    n_max: int = 50, x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES
) -> list[IdentityReport]:
    """Fourth-order family.

    eq28     : alt_power_sum(n,x,5) == (weight-4 display)(n,x) F_n(x) / 4!
    eq29     : x=0 form of eq28
    thm2.5a  : inverted eq28 == 1/(n+x+1)^5
    thm2.5b  : inverted eq29 == 1/(n+1)^5
    """
    reports: list[IdentityReport] = []
    for x in [Fraction(v) for v in x_samples]:
        h, f = _harmonic_rows(n_max, x, 4)
        d4 = [
            _poly_r4(h[0][k], h[1][k], h[2][k], h[3][k]) * f[k]
            for k in range(n_max + 1)
        ]
        reports += generic_check(
            "eq28",
            lambda n, x: alt_power_sum(n, x, 5),
            lambda n, x, _row=d4: _row[n] / 24,
            _grid_nx(n_max, [x]),
        )
        inv4 = binomial_inverse(d4)
        reports += generic_check(
            "thm2.5a",
            lambda n, x, _row=inv4: _row[n] / 24,
            lambda n, x: 1 / (Fraction(x) + n + 1) ** 5,
            _grid_nx(n_max, [x]),
        )
    h0, _ = _harmonic_rows(n_max, 0, 4)
    display0 = [
        _poly_r4(h0[0][k], h0[1][k], h0[2][k], h0[3][k]) / (k + 1)
        for k in range(n_max + 1)
    ]
    reports += generic_check(
        "eq29",
        lambda n: alt_power_sum(n, 0, 5),
        lambda n: display0[n] / 24,
        _grid_n(n_max),
    )
    reports += generic_check(
        "thm2.5b",
        _indexed([v / 24 for v in binomial_inverse(display0)]),
        lambda n: Fraction(1, (n + 1) ** 5),
        _grid_n(n_max),
    )
    return reports


def mixed_derivative_form(n: int, x: RationalLike, r: int) -> Fraction:
    """(-1)^r/(r+1)! * sum_l C(r,l) l! (-1)^l H_n(x,l+1) F_n^(r-l)(x), exact.

    The general finite identity states this equals alt_power_sum(n, x, r+2);
    the derivative values substitute the log-moment integrals exactly.
    """
    acc = Fraction(0)
    fact_l = 1
    for l in range(r + 1):
        term = binomial(r, l) * fact_l * _h(n, x, l + 1) * derivative_F(n, x, r - l)
        acc += -term if l % 2 else term
        fact_l *= l + 1
    result = acc / math.factorial(r + 1)
    return -result if r % 2 else result


def check_theorem_2_6_finite(
    r_max: int = 6,
    n_max: int = 30,
    x_samples: Sequence[RationalLike] = (Fraction(0), Fraction(1, 2)),
) -> list[IdentityReport]:
    """General-order finite identity (``thm2.6-finite``), exact for every (r, n, x)."""
    grid = [
        {"r": r, "n": n, "x": Fraction(x)}
        for r in range(r_max + 1)
        for x in x_samples
        for n in range(n_max + 1)
    ]
    return generic_check(
        "thm2.6-finite",
        lambda n, x, r: alt_power_sum(n, x, r + 2),
        mixed_derivative_form,
        grid,
    )


def check_beta_equality(
    n_max: int = 50, x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES
) -> list[IdentityReport]:
    """Product form vs alternating-sum form of F_n(x) (``beta-eq``)."""
    return generic_check("beta-eq", beta_F, beta_F_sum, _grid_nx(n_max, x_samples))


def check_lemma_a(
    n_max: int = 40,
    r_max: int = 8,
    x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES,
) -> list[IdentityReport]:
    """Derivative closure (``lemma-a``): F_n^(r)(x) == r!(-1)^r aps(n,x,r+1)."""
    grid = [
        {"r": r, "n": n, "x": Fraction(x)}
        for r in range(r_max + 1)
        for x in x_samples
        for n in range(n_max + 1)
    ]

    def rhs(n: int, x: RationalLike, r: int) -> Fraction:
        value = math.factorial(r) * alt_power_sum(n, x, r + 1)
        return -value if r % 2 else value

    return generic_check(
        "lemma-a", lambda n, x, r: derivative_F(n, x, r), rhs, grid
    )


def check_inversion(
    count: int = 1000, max_len: int = 64, seed: int = 20240601, n_max: int = 50
) -> list[IdentityReport]:
    """Involution on random rational sequences plus the forward/inverted duality.

    ``inversion`` entries index random trials (params n = trial index);
    ``inversion-duality`` checks that transforming the eq16 sequence yields
    the thm2.2b right-hand side.
    """
    rng = random.Random(seed)
    reports: list[IdentityReport] = []
    for trial in range(count):
        start = time.perf_counter()
        length = rng.randint(0, max_len)
        seq = [
            Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(length)
        ]
        roundtrip = binomial_inverse(binomial_inverse(seq))
        witness = next(
            ((a, b) for a, b in zip(roundtrip, seq) if a != b), None
        )
        elapsed = int((time.perf_counter() - start) * 1000)
        reports.append(
            IdentityReport(
                "inversion",
                {"n": trial},
                PASS if witness is None else FAIL,
                witness=witness,
                elapsed_ms=elapsed,
            )
        )
    forward = [harmonic_number(k + 1, 1) / (k + 1) for k in range(n_max + 1)]
    inverted = binomial_inverse(forward)
    reports += generic_check(
        "inversion-duality",
        lambda n: inverted[n],
        lambda n: Fraction(1, (n + 1) ** 2),
        _grid_n(n_max),
    )
    return reports


def deliberate_mismatch_check(n_max: int = 10) -> list[IdentityReport]:
    """A check that must fail; exercises the failure/witness/exit-code path."""
    return generic_check(
        "fixture-fail",
        lambda n: beta_F(n, 0),
        lambda n: Fraction(1, n + 2),
        _grid_n(n_max),
    )


CHECK_GROUPS: dict[str, Callable[..., list[IdentityReport]]] = {
    "thm2.2": check_theorem_2_2,
    "thm2.3": check_theorem_2_3,
    "thm2.5": check_theorem_2_5,
    "thm2.6": check_theorem_2_6_finite,
    "lemma-a": check_lemma_a,
    "beta-eq": check_beta_equality,
    "inversion": check_inversion,
}


def run_all(
    n_max: int = 50,
    r_max: int = 6,
    x_samples: Sequence[RationalLike] = DEFAULT_X_SAMPLES,
    max_workers: int | None = None,
    inversion_count: int = 1000,
) -> list[IdentityReport]:
    """Run every check group, optionally fanning groups out across threads.

    Results are merged in deterministic sorted order regardless of worker
    scheduling.  Grid points are independent; the only shared state is the
    write-once expansion cache.
    """
    from concurrent.futures import ThreadPoolExecutor

    xs = [Fraction(x) for x in x_samples]
    jobs: list[Callable[[], list[IdentityReport]]] = [
        lambda: check_theorem_2_2(n_max, xs),
        lambda: check_theorem_2_3(n_max, xs),
        lambda: check_theorem_2_5(n_max, xs),
        lambda: check_theorem_2_6_finite(r_max, min(n_max, 30), xs),
        lambda: check_lemma_a(min(n_max, 40), r_max, xs),
        lambda: check_beta_equality(n_max, xs),
        lambda: check_inversion(count=inversion_count, n_max=n_max),
    ]
    if max_workers is None or max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(lambda job: job(), jobs))
    else:
        results = [job() for job in jobs]
    merged = [report for group in results for report in group]
    merged.sort(key=IdentityReport.sort_key)
    return merged
