"""Generalized reversed aging intensity (GRAI) toolkit.

Parametric lifetime families, alpha-GRAI curves and the cdf reconstruction
they allow, kernel estimates of GRAI from data, least-squares/likelihood
fitting, goodness-of-fit tests and grid checks of GRAI stochastic orders.
"""

__version__ = "0.1.0"

from .characterize import (
    Anchor,
    ConditionReport,
    ReconstructedCdf,
    check_conditions,
    matching_anchor,
    reconstruct,
    reconstruct_neg,
    reconstruct_pos,
    reconstruct_zero,
    roundtrip_error,
)
from .datasets import component_failures
from .distributions import (
    ExponentiatedExponential,
    Exponential,
    GeneralizedPareto,
    InvLogLogistic,
    InvModifiedWeibull,
    InvWeibull2,
    LifetimeDistribution,
    Reciprocal,
    parse_family,
    quantile_grid,
)
from .errors import (
    ConditionError,
    DomainError,
    QuadratureError,
    RaintensityError,
    RootFindingError,
    ValidationError,
)
from .estimate import GridSpec, KdeModel, default_bandwidth, empirical_grai, grai_grid, kde_cdf, kde_pdf
from .fit import FitConfig, FitReport, fit_ls, fit_pipeline, mle_lambda_invllog, mle_lambda_invmw, mle_lambda_invw2
from .gof import GofReport, chi_square, expected_frequencies, ks_statistic, ks_test
from .grai import (
    FunctionCurve,
    SymbolicCurve,
    TabulatedCurve,
    ai_alpha,
    cum_reversed_hazard_alpha,
    grai_alpha,
    grai_general,
    grai_plugin,
    reversed_hazard,
)
from .orders import OrderCheckResult, implication_report, rai_order_check, reciprocal_duality_check
from .sample import Sample
