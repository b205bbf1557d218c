"""Estimation for distributions of the form F(x) = 1 - exp{-B(theta) A(x)}.

The package covers the closed-form maximum-likelihood estimator of theta
from i.i.d. samples and from upper record values, the plug-in density and
CDF estimates, truncated series for their moments, and two independent
oracles (adaptive quadrature and deterministic Monte Carlo) that check the
series. The ``recordmle`` console script exposes the same functionality on
the command line.
"""

from .closedform import (
    SeriesValue,
    alpha_n_exponential,
    expected_cdf_hat_series,
    expected_pdf_hat_series,
    gamma_ratio,
    mse_cdf_hat_series,
    mse_g_power_series,
    mse_pdf_hat_series,
    w_alpha_series,
)
from .errors import (
    ArgumentError,
    DegenerateSampleError,
    DivergenceError,
    DomainError,
    EstimatorRangeError,
    RecordCapError,
    RecordMleError,
    ReplicationFailureError,
)
from .estimate import (
    EstimateReport,
    cdf_hat_records,
    cdf_hat_sample,
    mle_theta_records,
    mle_theta_sample,
    pdf_hat_records,
    pdf_hat_sample,
)
from .family import (
    FamilySpec,
    ValidationReport,
    a_inverse,
    b_inverse,
    builtin_descriptions,
    cdf,
    make_exponential,
    make_lomax,
    make_pareto,
    make_weibull,
    pdf,
    quantile,
    resolve_family,
    validate_family,
)
from .oracle import (
    ExperimentConfig,
    MomentReport,
    consistency_curve,
    exact_expected_cdf_hat,
    exact_expected_pdf_hat,
    exact_mse_cdf_hat,
    exact_mse_g_power,
    exact_mse_pdf_hat,
    exact_mse_theta_hat,
    expect_over_gamma,
    ks_two_sample,
    mc_estimate,
    mc_statistic_array,
)
from .records import (
    RecordSequence,
    Sample,
    extract_upper_records,
    sample_iid,
    sample_records_direct,
    sample_records_sequential,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # family
    "FamilySpec",
    "ValidationReport",
    "validate_family",
    "cdf",
    "pdf",
    "quantile",
    "a_inverse",
    "b_inverse",
    "make_exponential",
    "make_lomax",
    "make_weibull",
    "make_pareto",
    "resolve_family",
    "builtin_descriptions",
    # records
    "Sample",
    "RecordSequence",
    "extract_upper_records",
    "sample_iid",
    "sample_records_direct",
    "sample_records_sequential",
    # estimate
    "EstimateReport",
    "mle_theta_sample",
    "mle_theta_records",
    "pdf_hat_sample",
    "cdf_hat_sample",
    "pdf_hat_records",
    "cdf_hat_records",
    # closedform
    "SeriesValue",
    "w_alpha_series",
    "expected_cdf_hat_series",
    "expected_pdf_hat_series",
    "mse_cdf_hat_series",
    "mse_pdf_hat_series",
    "alpha_n_exponential",
    "mse_g_power_series",
    "gamma_ratio",
    # oracle
    "ExperimentConfig",
    "MomentReport",
    "expect_over_gamma",
    "exact_expected_cdf_hat",
    "exact_expected_pdf_hat",
    "exact_mse_cdf_hat",
    "exact_mse_pdf_hat",
    "exact_mse_theta_hat",
    "exact_mse_g_power",
    "mc_estimate",
    "mc_statistic_array",
    "ks_two_sample",
    "consistency_curve",
    # errors
    "RecordMleError",
    "DomainError",
    "ArgumentError",
    "DegenerateSampleError",
    "EstimatorRangeError",
    "DivergenceError",
    "RecordCapError",
    "ReplicationFailureError",
]
