"""Normal populations: conjugate Normal-Gamma posterior for (mean, precision).

Under the non-informative prior proportional to 1/precision, the posterior
of (mean, precision) given n observations with sample mean m and standard
deviation s (divide-by-n convention) is Normal-Gamma with

    location = m,  precision_scale = n,  shape = (n - 1) / 2,  rate = n * s^2 / 2,

i.e. precision ~ Gamma(shape, rate) and mean | precision ~
Normal(location, 1 / (precision_scale * precision)).  No MCMC is needed.
The CV of a Normal(mu, 1/phi) population is 1 / (|mu| * sqrt(phi)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import UndefinedCvError, ValidationError
from ..mcmc.diagnostics import summarize_chain
from ..rng import rng_stream
from ..samples import Sample
from ..validation import check_count, check_finite_scalar, check_positive_scalar
from .base import CvDraws, CvModel


@dataclass(frozen=True)
class NormalGammaParams:
    """Hyperparameters of a Normal-Gamma distribution for (mean, precision)."""

    location: float
    precision_scale: float
    shape: float
    rate: float

    def __post_init__(self):
        check_finite_scalar(self.location, "location")
        check_positive_scalar(self.precision_scale, "precision_scale")
        check_positive_scalar(self.shape, "shape")
        check_positive_scalar(self.rate, "rate")


def normal_posterior_params(sample: Sample) -> NormalGammaParams:
    """Posterior Normal-Gamma hyperparameters for one Normal sample."""
    if sample.n < 2:
        raise ValidationError("need n >= 2 observations")
    if sample.sd <= 0:
        raise ValidationError("degenerate sample: sd must be > 0 for the Normal model")
    return NormalGammaParams(
        location=sample.mean,
        precision_scale=float(sample.n),
        shape=(sample.n - 1) / 2.0,
        rate=sample.n * sample.sd**2 / 2.0,
    )


def sample_normal_gamma(params: NormalGammaParams, n_draws: int, seed) -> np.ndarray:
    """Joint draws from a Normal-Gamma; columns (mean, precision)."""
    n_draws = check_count(n_draws, "n_draws", minimum=1)
    rng = rng_stream(seed)
    precision = rng.gamma(shape=params.shape, scale=1.0 / params.rate, size=n_draws)
    mean = params.location + rng.standard_normal(n_draws) / np.sqrt(
        params.precision_scale * precision
    )
    return np.column_stack([mean, precision])


def normal_gamma_logpdf(mean, precision, params: NormalGammaParams) -> np.ndarray:
    """Unnormalised log density of the Normal-Gamma posterior."""
    mean = np.asarray(mean, dtype=float)
    precision = np.asarray(precision, dtype=float)
    return (
        (params.shape - 0.5) * np.log(precision)
        - params.rate * precision
        - 0.5 * params.precision_scale * precision * (mean - params.location) ** 2
    )


def normal_gamma_logpdf_grad(mean, precision, params: NormalGammaParams) -> np.ndarray:
    """Gradient of :func:`normal_gamma_logpdf` wrt (mean, precision)."""
    d_mean = -params.precision_scale * precision * (mean - params.location)
    d_prec = (
        (params.shape - 0.5) / precision
        - params.rate
        - 0.5 * params.precision_scale * (mean - params.location) ** 2
    )
    return np.array([d_mean, d_prec])


def cv_normal(mean, precision):
    """CV of Normal(mean, 1/precision): 1 / (|mean| * sqrt(precision))."""
    mean_arr = np.asarray(mean, dtype=float)
    if np.any(mean_arr == 0.0):
        raise UndefinedCvError("CV is undefined at mean 0")
    out = 1.0 / (np.abs(mean_arr) * np.sqrt(np.asarray(precision, dtype=float)))
    return float(out) if np.isscalar(mean) or mean_arr.ndim == 0 else out


class NormalModel(CvModel):
    name = "normal"
    param_names = ("mean", "precision")
    needs_raw_values = False
    uses_mcmc = False

    def validate_sample(self, sample: Sample) -> None:
        if sample.sd <= 0:
            raise ValidationError("normal model needs sd > 0")

    def cv_draws(self, sample, n_draws=None, seed=None, config=None, diagnostics=True):
        self.validate_sample(sample)
        n_draws = check_count(10_000 if n_draws is None else n_draws, "n_draws", minimum=1)
        draws = sample_normal_gamma(normal_posterior_params(sample), n_draws, seed)
        mean, precision = draws[:, 0], draws[:, 1]
        keep = mean != 0.0
        n_rejected = int(np.count_nonzero(~keep))
        self._warn_rejections(n_rejected, n_draws)
        values = cv_normal(mean[keep], precision[keep])
        report = None
        if diagnostics:
            report = summarize_chain(
                values[:, None], kind="independent", acceptance_rate=1.0, param_names=("cv",)
            )
        return (
            CvDraws(values=values, n_rejected=n_rejected,
                    param_draws=values[:, None], param_names=("cv",)),
            report,
        )

    def simulate(self, params, n, rng):
        return rng.normal(params["mean"], params["sd"], size=n)

    def true_cv(self, params):
        if params["mean"] == 0:
            raise UndefinedCvError("CV is undefined at mean 0")
        return params["sd"] / abs(params["mean"])
