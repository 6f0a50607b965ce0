"""Exact harmonic/beta-family computations with verification tooling."""

from .beta_engine import (
    BellExpansion,
    BetaValue,
    alt_power_sum,
    bell_expansion,
    beta_F,
    beta_F_sum,
    derivative_F,
)
from .float_oracle import (
    MonteCarloResult,
    QuadratureError,
    QuadratureResult,
    cube_monte_carlo,
    log_moment_quadrature,
)
from .harmonic_core import (
    BernoulliTable,
    DomainError,
    HarmonicVector,
    bernoulli_table,
    binomial,
    format_rational,
    harmonic_function,
    harmonic_number,
    harmonic_vector,
    parse_rational,
    zeta_even_coefficient,
)
from .identity_suite import (
    IdentityReport,
    binomial_inverse,
    check_beta_equality,
    check_inversion,
    check_lemma_a,
    check_theorem_2_2,
    check_theorem_2_3,
    check_theorem_2_5,
    check_theorem_2_6_finite,
    generic_check,
    run_all,
)
from .series_lab import (
    EXACT_N_MAX,
    PiPower,
    SeriesEstimate,
    corollary_2_4_partial,
    hurwitz_partial,
    lemma_c_partial,
    multi_integral_exact,
    theorem_2_6_series,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BellExpansion",
    "BernoulliTable",
    "BetaValue",
    "DomainError",
    "EXACT_N_MAX",
    "HarmonicVector",
    "IdentityReport",
    "MonteCarloResult",
    "PiPower",
    "QuadratureError",
    "QuadratureResult",
    "SeriesEstimate",
    "alt_power_sum",
    "bell_expansion",
    "bernoulli_table",
    "beta_F",
    "beta_F_sum",
    "binomial",
    "binomial_inverse",
    "check_beta_equality",
    "check_inversion",
    "check_lemma_a",
    "check_theorem_2_2",
    "check_theorem_2_3",
    "check_theorem_2_5",
    "check_theorem_2_6_finite",
    "corollary_2_4_partial",
    "cube_monte_carlo",
    "derivative_F",
    "format_rational",
    "generic_check",
    "harmonic_function",
    "harmonic_number",
    "harmonic_vector",
    "hurwitz_partial",
    "lemma_c_partial",
    "log_moment_quadrature",
    "multi_integral_exact",
    "parse_rational",
    "run_all",
    "theorem_2_6_series",
    "zeta_even_coefficient",
]
