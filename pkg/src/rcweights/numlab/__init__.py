"""Numerical weight laboratory: p-means, reversal estimates, experiments."""

from .balls import Ball, BallFamily, Domain
from .config import ConfigError, EstimateJob, build_weight, load_job, load_job_file
from .estimate import (
    EstimateReport, estimate_constant, power_ap_oracle, stability_probe,
    weak_estimate,
)
from .experiments import EXPERIMENT_NAMES, run_experiment
from .means import (
    AUTO, BLO_KIND, BMO_KIND, BUO_KIND, DEFAULT_RESOLUTION, EXACT, QUADRATURE,
    integral_log, integral_pow, log_oscillation, log_oscillation_ball, p_mean,
    quad_nodes, reversal_ratio, weak_reversal_ratio,
)
from .weights import (
    PiecewisePower, ProductWeight, Weight, constant_weight, max_power_const,
    piecewise_constant, power_weight,
)

__all__ = [
    "AUTO", "BLO_KIND", "BMO_KIND", "BUO_KIND", "Ball", "BallFamily",
    "ConfigError", "DEFAULT_RESOLUTION", "Domain", "EXACT", "EXPERIMENT_NAMES",
    "EstimateJob", "EstimateReport", "PiecewisePower", "ProductWeight",
    "QUADRATURE", "Weight", "build_weight", "constant_weight",
    "estimate_constant", "integral_log", "integral_pow", "load_job",
    "load_job_file", "log_oscillation", "log_oscillation_ball",
    "max_power_const", "p_mean", "piecewise_constant", "power_ap_oracle",
    "power_weight", "quad_nodes", "reversal_ratio", "run_experiment",
    "stability_probe", "weak_estimate", "weak_reversal_ratio",
]
