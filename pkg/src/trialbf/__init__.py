"""Bayes factors from published trial summary statistics.

Typical use::

    from trialbf import EffectSummary, ConfidenceInterval, log_transform, GridSpec, grid_eval

    summary = EffectSummary("trial", 1.63, "OR", ConfidenceInterval(0.93, 2.85),
                            benefit_direction="above_one")
    effect = log_transform(summary)
    grid = grid_eval(effect, GridSpec.for_effect(effect))
    grid.max_cell.bf   # about 4.316
"""

from trialbf.bayes import (
    BayesFactorResult,
    BFKind,
    PriorSpec,
    Truncation,
    bayes_factor,
    benefit_truncation,
    bf_normal,
    bf_point,
    bf_trunc,
    bf_unit_information,
    posterior_odds,
)
from trialbf.effects import (
    BenefitSign,
    ConfidenceInterval,
    Direction,
    EffectSummary,
    LogEffect,
    Scale,
    SEPreference,
    SESource,
    log_transform,
    read_batch,
    se_from_ci,
    se_from_p,
)
from trialbf.errors import (
    CannotRecoverError,
    ConfigurationError,
    DomainError,
    OracleFailureError,
    TrialBFError,
    UnsupportedPointPriorError,
    UnusableSummaryError,
)
from trialbf.evidence import Category, EvidenceLabel, classify_evidence, classify_log_bf
from trialbf.normal import normal_log_pdf, std_normal_cdf, std_normal_logcdf, std_normal_quantile
from trialbf.oracle import bf_quadrature_oracle, log_bf_quadrature_oracle
from trialbf.reverse import ReverseBayesRegion, rb_mu_bounds, rb_region
from trialbf.sensitivity import GridSpec, SensitivityGrid, grid_clip, grid_eval, grid_max

__version__ = "0.1.0"

__all__ = [
    "BayesFactorResult",
    "BFKind",
    "PriorSpec",
    "Truncation",
    "bayes_factor",
    "benefit_truncation",
    "bf_normal",
    "bf_point",
    "bf_trunc",
    "bf_unit_information",
    "posterior_odds",
    "BenefitSign",
    "ConfidenceInterval",
    "Direction",
    "EffectSummary",
    "LogEffect",
    "Scale",
    "SEPreference",
    "SESource",
    "log_transform",
    "read_batch",
    "se_from_ci",
    "se_from_p",
    "CannotRecoverError",
    "ConfigurationError",
    "DomainError",
    "OracleFailureError",
    "TrialBFError",
    "UnsupportedPointPriorError",
    "UnusableSummaryError",
    "Category",
    "EvidenceLabel",
    "classify_evidence",
    "classify_log_bf",
    "normal_log_pdf",
    "std_normal_cdf",
    "std_normal_logcdf",
    "std_normal_quantile",
    "bf_quadrature_oracle",
    "log_bf_quadrature_oracle",
    "ReverseBayesRegion",
    "rb_mu_bounds",
    "rb_region",
    "GridSpec",
    "SensitivityGrid",
    "grid_clip",
    "grid_eval",
    "grid_max",
]

