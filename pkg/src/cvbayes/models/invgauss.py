"""Inverse Gaussian populations.

With the non-informative prior proportional to (mu^3 * lam)^(-1/2), the
posterior of (mu, lam) given n positive observations depends on the data
only through the arithmetic mean m and the harmonic mean a:

    log posterior = (n - 1)/2 * log(lam) - 3/2 * log(mu)
                    - n * lam / 2 * (m / mu^2 - 2 / mu + 1 / a)   (+ const).

The CV is sqrt(mu / lam); draws come from random-walk Metropolis on
(log mu, log lam) with the log-scale Jacobian included in the target.
"""

from __future__ import annotations

import math

import numpy as np

from ..exceptions import ValidationError
from ..mcmc.sampler import SamplerConfig, rw_metropolis
from ..samples import Sample
from ..validation import check_count, check_positive_vector
from .base import CvDraws, CvModel

_DEFAULT = dict(n_iterations=200_000, burn_in=10_000, thin=5)


def _sufficient_stats(sample: Sample) -> tuple[int, float, float]:
    """(n, arithmetic mean, harmonic mean), validating positivity."""
    if sample.has_values:
        check_positive_vector(sample.values, "values")
    if sample.harmonic_mean is None:
        raise ValidationError(
            "inverse Gaussian model needs positive raw values or a summary "
            "with a harmonic mean"
        )
    if not sample.mean > sample.harmonic_mean:
        raise ValidationError(
            "degenerate sample: arithmetic mean must exceed harmonic mean"
        )
    return sample.n, sample.mean, sample.harmonic_mean


def invgauss_log_posterior(mu, lam, sample: Sample):
    """Unnormalised log posterior at (mu, lam); vectorises over parameters."""
    n, m, a = _sufficient_stats(sample)
    mu = np.asarray(mu, dtype=float)
    lam = np.asarray(lam, dtype=float)
    out = (
        0.5 * (n - 1) * np.log(lam)
        - 1.5 * np.log(mu)
        - 0.5 * n * lam * (m / mu**2 - 2.0 / mu + 1.0 / a)
    )
    return float(out) if out.ndim == 0 else out


def invgauss_log_posterior_grad(mu, lam, sample: Sample) -> np.ndarray:
    """Gradient of :func:`invgauss_log_posterior` wrt (mu, lam)."""
    n, m, a = _sufficient_stats(sample)
    d_mu = -1.5 / mu + n * lam * (m / mu**3 - 1.0 / mu**2)
    d_lam = 0.5 * (n - 1) / lam - 0.5 * n * (m / mu**2 - 2.0 / mu + 1.0 / a)
    return np.array([d_mu, d_lam])


def cv_invgauss(mu, lam):
    """CV of an inverse Gaussian(mu, lam): sqrt(mu / lam)."""
    out = np.sqrt(np.asarray(mu, dtype=float) / np.asarray(lam, dtype=float))
    return float(out) if out.ndim == 0 else out


def log_scale_target(sample: Sample):
    """Metropolis target on (log mu, log lam): posterior plus the Jacobian."""
    n, m, a = _sufficient_stats(sample)
    half_n = 0.5 * n
    lam_coef = 0.5 * (n + 1)  # (n - 1)/2 from the posterior + 1 from the Jacobian

    def log_target(v):
        log_mu, log_lam = v
        mu = math.exp(log_mu)
        lam = math.exp(log_lam)
        # -3/2 log(mu) from the posterior + log(mu) from the Jacobian
        return (
            lam_coef * log_lam
            - 0.5 * log_mu
            - half_n * lam * (m / (mu * mu) - 2.0 / mu + 1.0 / a)
        )

    return log_target


class InverseGaussianModel(CvModel):
    name = "invgauss"
    param_names = ("mu", "lam")
    needs_raw_values = False  # a summary with the harmonic mean suffices

    def validate_sample(self, sample: Sample) -> None:
        _sufficient_stats(sample)

    def default_config(self, sample: Sample) -> SamplerConfig:
        n, m, a = _sufficient_stats(sample)
        mu0 = m
        lam0 = 1.0 / (1.0 / a - 1.0 / m)
        # rough posterior sds on the log scale; adaptation refines them
        scale_mu = math.sqrt(mu0 / lam0) / math.sqrt(n)
        scale_lam = math.sqrt(2.0 / n)
        return SamplerConfig(
            initial_point=(math.log(mu0), math.log(lam0)),
            step_scales=(1.7 * scale_mu, 1.7 * scale_lam),
            **_DEFAULT,
        )

    def _resize(self, config: SamplerConfig, n_draws: int) -> SamplerConfig:
        return config.override(n_iterations=config.burn_in + config.thin * n_draws)

    def cv_draws(self, sample, n_draws=None, seed=None, config=None, diagnostics=True):
        _sufficient_stats(sample)
        if config is None:
            config = self.default_config(sample)
            if n_draws is not None:
                config = self._resize(config, check_count(n_draws, "n_draws", minimum=1))
        draws, report = rw_metropolis(
            log_scale_target(sample), config, seed, param_names=("log_mu", "log_lam")
        )
        values = np.exp(0.5 * (draws[:, 0] - draws[:, 1]))  # sqrt(mu / lam)
        if not diagnostics:
            report = None
        return (
            CvDraws(values=values, n_rejected=0,
                    param_draws=draws, param_names=("log_mu", "log_lam")),
            report,
        )

    def simulate(self, params, n, rng):
        return rng.wald(params["mu"], params["lam"], size=n)

    def true_cv(self, params):
        return math.sqrt(params["mu"] / params["lam"])
