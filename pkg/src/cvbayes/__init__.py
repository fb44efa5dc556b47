"""Bayesian comparison of coefficients of variation for two populations.

The package estimates, by Monte Carlo integration over posterior draws, the
discrepancy measure of the precise hypothesis that two independent
populations share the same coefficient of variation, under Normal, inverse
Gaussian, skew-Normal and Negative Binomial models with non-informative
priors.  It ships the samplers (conjugate or MCMC), convergence
diagnostics, a replication/simulation harness and a command-line interface.
"""

from .__about__ import __version__
from .compare import ComparisonReport, PopulationSummary, compare_samples
from .discrepancy import (
    DiscrepancyResult,
    UnimodalityReport,
    check_unimodality,
    discrepancy_from_draws,
    discrepancy_of_difference,
)
from .estimator import CvDiscrepancy
from .exceptions import (
    CvBayesError,
    DegenerateChainError,
    MissingDataError,
    UndefinedCvError,
    ValidationError,
)
from .mcmc import (
    ChainReport,
    GateThresholds,
    SamplerConfig,
    convergence_gate,
    effective_sample_size,
    rw_metropolis,
)
from .models import MODELS, cv_draws, get_model
from .replication import reproduce_example
from .samples import Sample, load_sample
from .simulation import (
    StudyGrid,
    StudyResult,
    bootstrap_cv_test,
    load_grid,
    run_consistency_study,
    run_fncr_study,
    run_uniformity_check,
)

__all__ = [
    "ChainReport",
    "ComparisonReport",
    "CvBayesError",
    "CvDiscrepancy",
    "DegenerateChainError",
    "DiscrepancyResult",
    "GateThresholds",
    "MODELS",
    "MissingDataError",
    "PopulationSummary",
    "Sample",
    "SamplerConfig",
    "StudyGrid",
    "StudyResult",
    "UndefinedCvError",
    "UnimodalityReport",
    "ValidationError",
    "__version__",
    "bootstrap_cv_test",
    "check_unimodality",
    "compare_samples",
    "convergence_gate",
    "cv_draws",
    "discrepancy_from_draws",
    "discrepancy_of_difference",
    "effective_sample_size",
    "get_model",
    "load_grid",
    "load_sample",
    "reproduce_example",
    "run_consistency_study",
    "run_fncr_study",
    "run_uniformity_check",
    "rw_metropolis",
]
