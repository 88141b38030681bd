"""Exact Cantor-distribution moments and their certified series constant.

Library layout:

* :mod:`cantor_moments.exact` — rationals, Bernoulli numbers, exact
  harmonic numbers, decimal fixed point;
* :mod:`cantor_moments.moments` — the moments by two independent exact
  methods, partial sums, remainder-decay fit;
* :mod:`cantor_moments.constant` — certified evaluation of the series
  constant -1/3 + (2/3) sum (2/3)**k H(2**k);
* :mod:`cantor_moments.cantor` — Cantor function values and the
  quadrature oracle for the defining integral;
* :mod:`cantor_moments.contour` — double-precision verification of the
  vertical-line integral identities;
* :mod:`cantor_moments.cli` — the ``cantor-moments`` command.
"""

from .cantor import (
    CantorEvalSpec,
    cantor_value,
    grid_cantor_values,
    integral_quadrature,
    self_similarity_residuals,
)
from .constant import (
    ConstantResult,
    PrecisionBudget,
    default_budget,
    double_sum_check,
    euler_gamma,
    harmonic_fixed,
    ln2,
    ln2_alt,
    moment_series_constant,
    series_tail_bound,
    weighted_harmonic_sum,
    weighted_harmonic_sum_exact,
)
from .contour import (
    QuadratureError,
    QuadratureSpec,
    constant_contour,
    gamma_complex,
    loggamma_complex,
    moment_contour,
    perron_kernel,
    zeta_complex,
)
from .exact import BigFixed, Rational, bernoulli, binomial, harmonic_exact, to_fixed
from .moments import (
    DecayFit,
    MomentMethod,
    MomentRecord,
    decay_fit,
    moment_bernoulli,
    moment_recursive,
    partial_sum,
)

__version__ = "0.1.0"

__all__ = [
    "BigFixed",
    "CantorEvalSpec",
    "ConstantResult",
    "DecayFit",
    "MomentMethod",
    "MomentRecord",
    "PrecisionBudget",
    "QuadratureError",
    "QuadratureSpec",
    "Rational",
    "bernoulli",
    "binomial",
    "cantor_value",
    "constant_contour",
    "decay_fit",
    "default_budget",
    "double_sum_check",
    "euler_gamma",
    "gamma_complex",
    "grid_cantor_values",
    "harmonic_exact",
    "harmonic_fixed",
    "integral_quadrature",
    "self_similarity_residuals",
    "ln2",
    "ln2_alt",
    "loggamma_complex",
    "moment_bernoulli",
    "moment_contour",
    "moment_recursive",
    "moment_series_constant",
    "partial_sum",
    "perron_kernel",
    "series_tail_bound",
    "to_fixed",
    "weighted_harmonic_sum",
    "weighted_harmonic_sum_exact",
    "zeta_complex",
]
