"""Predicted and empirical densities of prime and square-free polynomial
values: sparse multivariate integer polynomials, local zero counts and
singular series, complete exponential sums, archimedean integrals, and
exhaustive lattice verification."""

__version__ = "0.1.0"

from .counting import (
    BudgetExceededError,
    CountResult,
    SquarefreeUnknownError,
    count_values,
    is_prime,
    is_prime_certified,
    is_squarefree,
    primes_in_interval,
    primes_upto,
    squarefree_table,
)
from .expsums import (
    ExpSumTable,
    big_g,
    big_g_from_definition,
    complete_exp_sum,
    g_local,
    observatory_check,
    orthogonality_count,
    q_alpha,
    s_alpha,
    t_f,
    trig_poly_eval,
    w_alpha,
)
from .integrals import (
    laurent_expansion,
    li_f,
    li_joint,
    log_moment,
    oscillatory_integral,
)
from .intervals import (
    CertificationError,
    PositivityError,
    certify_above,
    interval_eval,
    value_range,
)
from .localcounts import (
    EulerProductEstimate,
    HypothesisViolationError,
    LocalFactor,
    count_zeros_mod,
    euler_product,
    fixed_prime_divisors,
    joint_euler_factor,
    prime_euler_factor,
    squarefree_euler_factor,
)
from .poly import (
    Box,
    MultiPoly,
    ParseError,
    PolynomialError,
    SigmaEstimate,
    heuristic_irreducibility,
    parse_polynomial,
    separability_check,
    singular_dimension_estimate,
)
from .quadrature import QuadratureResult, integrate_box
from .reports import (
    ExperimentReport,
    ExperimentRow,
    HypothesisCheck,
    HypothesisReport,
    emit_report,
    report_from_dict,
)
from .verify import ConfigError, check_hypotheses, parse_config, run_experiment

__all__ = [
    "__version__",
    "Box",
    "BudgetExceededError",
    "CertificationError",
    "ConfigError",
    "CountResult",
    "EulerProductEstimate",
    "ExpSumTable",
    "ExperimentReport",
    "ExperimentRow",
    "HypothesisCheck",
    "HypothesisReport",
    "HypothesisViolationError",
    "LocalFactor",
    "MultiPoly",
    "ParseError",
    "PolynomialError",
    "PositivityError",
    "QuadratureResult",
    "SigmaEstimate",
    "SquarefreeUnknownError",
    "big_g",
    "big_g_from_definition",
    "certify_above",
    "check_hypotheses",
    "complete_exp_sum",
    "count_values",
    "count_zeros_mod",
    "emit_report",
    "euler_product",
    "fixed_prime_divisors",
    "g_local",
    "heuristic_irreducibility",
    "integrate_box",
    "interval_eval",
    "is_prime",
    "is_prime_certified",
    "is_squarefree",
    "joint_euler_factor",
    "laurent_expansion",
    "li_f",
    "li_joint",
    "log_moment",
    "observatory_check",
    "orthogonality_count",
    "oscillatory_integral",
    "parse_config",
    "parse_polynomial",
    "prime_euler_factor",
    "primes_in_interval",
    "primes_upto",
    "q_alpha",
    "report_from_dict",
    "run_experiment",
    "s_alpha",
    "separability_check",
    "singular_dimension_estimate",
    "squarefree_euler_factor",
    "squarefree_table",
    "t_f",
    "trig_poly_eval",
    "value_range",
    "w_alpha",
]
