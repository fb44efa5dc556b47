"""Negative Binomial populations (Poisson-Gamma mixture parametrisation).

Counts follow NB(success probability beta/(beta+1), size alpha), i.e. the
marginal of Poisson(lambda) with lambda ~ Gamma(alpha, beta).  Mean is
alpha/beta, variance alpha*(beta+1)/beta^2, so the CV is
sqrt((beta+1)/alpha).  The non-informative prior is

    prior(alpha, beta) ~ (1/beta) * sqrt(alpha * trigamma(alpha) - 1),

where trigamma is the second derivative of log Gamma; alpha * trigamma(alpha)
exceeds 1 for every alpha > 0, so the square root is always defined.
Factorials in the count likelihood are read as Gamma functions since alpha
is continuous.  Sampling runs random-walk Metropolis on
(log alpha, log beta) with the Jacobian in the target.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma, gammaln, polygamma

from ..exceptions import ValidationError
from ..mcmc.sampler import SamplerConfig, rw_metropolis
from ..samples import Sample
from ..validation import check_count, check_count_vector
from .base import CvDraws, CvModel

_DEFAULT = dict(n_iterations=130_000, burn_in=30_000, thin=1)


def trigamma(x):
    """Second derivative of log Gamma (series sum_j (x+j)^-2 for x > 0)."""
    return polygamma(1, x)


def _count_stats(sample: Sample) -> tuple[np.ndarray, np.ndarray, int, float]:
    """(unique values, multiplicities, n, mean) of the validated counts."""
    if not sample.has_values:
        raise ValidationError("negative binomial model needs raw count data")
    values = check_count_vector(sample.values, "values")
    unique, counts = np.unique(values, return_counts=True)
    return unique, counts.astype(float), sample.n, sample.mean


def log_prior_factor(alpha) -> np.ndarray:
    """log sqrt(alpha * trigamma(alpha) - 1), asserting positivity."""
    alpha = np.asarray(alpha, dtype=float)
    inner = alpha * trigamma(alpha) - 1.0
    assert np.all(inner > 0.0), "alpha * trigamma(alpha) - 1 must be positive"
    return 0.5 * np.log(inner)


def negbin_log_posterior(alpha, beta, sample: Sample):
    """Unnormalised log posterior at (alpha, beta); vectorises over parameters."""
    unique, mult, n, mean = _count_stats(sample)
    alpha_arr = np.asarray(alpha, dtype=float)
    beta_arr = np.asarray(beta, dtype=float)
    scalar = alpha_arr.ndim == 0 and beta_arr.ndim == 0
    a = np.atleast_1d(alpha_arr)[:, None]
    data_term = (mult[None, :] * (gammaln(unique[None, :] + a) - gammaln(a))).sum(axis=1)
    out = (
        data_term
        + n * (alpha_arr * np.log(beta_arr) - (alpha_arr + mean) * np.log1p(beta_arr))
        - np.log(beta_arr)
        + log_prior_factor(alpha_arr)
    )
    return float(out[0]) if scalar else out


def negbin_log_posterior_grad(alpha, beta, sample: Sample) -> np.ndarray:
    """Gradient of :func:`negbin_log_posterior` wrt (alpha, beta)."""
    unique, mult, n, mean = _count_stats(sample)
    inner = alpha * trigamma(alpha) - 1.0
    d_alpha = (
        float((mult * (digamma(unique + alpha) - digamma(alpha))).sum())
        + n * (math.log(beta) - math.log1p(beta))
        + 0.5 * (trigamma(alpha) + alpha * polygamma(2, alpha)) / inner
    )
    d_beta = n * (alpha / beta - (alpha + mean) / (beta + 1.0)) - 1.0 / beta
    return np.array([d_alpha, d_beta])


def cv_negbin(alpha, beta):
    """CV of NB(beta/(beta+1), alpha): sqrt((beta + 1) / alpha)."""
    out = np.sqrt((np.asarray(beta, dtype=float) + 1.0) / np.asarray(alpha, dtype=float))
    return float(out) if out.ndim == 0 else out


def log_scale_target(sample: Sample):
    """Metropolis target on (log alpha, log beta): posterior plus the Jacobian."""
    unique, mult, n, mean = _count_stats(sample)

    def log_target(v):
        log_alpha, log_beta = v
        alpha = math.exp(log_alpha)
        beta = math.exp(log_beta)
        inner = alpha * trigamma(alpha) - 1.0
        assert inner > 0.0, "alpha * trigamma(alpha) - 1 must be positive"
        data_term = float((mult * (gammaln(unique + alpha) - gammaln(alpha))).sum())
        # the -log(beta) prior cancels the +log(beta) Jacobian
        return (
            data_term
            + n * (alpha * log_beta - (alpha + mean) * math.log1p(beta))
            + log_alpha
            + 0.5 * math.log(inner)
        )

    return log_target


def _moment_start(sample: Sample) -> tuple[float, float]:
    """Method-of-moments (alpha, beta), with a weak fallback when the
    sample shows no overdispersion."""
    mean = sample.mean
    var = sample.sd**2
    if mean <= 0:
        raise ValidationError("all-zero count sample: NB parameters are unidentifiable")
    if var > mean * 1.0001:
        beta0 = mean / (var - mean)
    else:
        beta0 = 10.0
    return mean * beta0, beta0


class NegativeBinomialModel(CvModel):
    name = "negbin"
    param_names = ("alpha", "beta")
    needs_raw_values = True

    def validate_sample(self, sample: Sample) -> None:
        _count_stats(sample)
        _moment_start(sample)

    def default_config(self, sample: Sample) -> SamplerConfig:
        alpha0, beta0 = _moment_start(sample)
        scale = 2.0 / math.sqrt(sample.n)
        return SamplerConfig(
            initial_point=(math.log(alpha0), math.log(beta0)),
            step_scales=(scale, scale),
            **_DEFAULT,
        )

    def _resize(self, config: SamplerConfig, n_draws: int) -> SamplerConfig:
        return config.override(n_iterations=config.burn_in + config.thin * n_draws)

    def cv_draws(self, sample, n_draws=None, seed=None, config=None, diagnostics=True):
        _count_stats(sample)
        _moment_start(sample)
        if config is None:
            config = self.default_config(sample)
            if n_draws is not None:
                config = self._resize(config, check_count(n_draws, "n_draws", minimum=1))
        draws, report = rw_metropolis(
            log_scale_target(sample), config, seed, param_names=("log_alpha", "log_beta")
        )
        values = np.sqrt((np.exp(draws[:, 1]) + 1.0) / np.exp(draws[:, 0]))
        if not diagnostics:
            report = None
        return (
            CvDraws(values=values, n_rejected=0,
                    param_draws=draws, param_names=("log_alpha", "log_beta")),
            report,
        )

    def simulate(self, params, n, rng):
        alpha, beta = params["alpha"], params["beta"]
        return rng.negative_binomial(alpha, beta / (beta + 1.0), size=n).astype(float)

    def true_cv(self, params):
        return math.sqrt((params["beta"] + 1.0) / params["alpha"])
