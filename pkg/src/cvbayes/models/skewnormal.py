"""Skew-Normal populations.

Density (2/sigma) * phi(z) * Phi(lam * z) with z = (x - mu)/sigma.  The
prior is 1/sigma times a heavy-tailed shape prior on lam: a generalised
Student-t with location 0, scale pi/2 and one-half degree of freedom,

    shape_prior(lam) = sqrt(pi)/B(1/4, 1/2) * (1 + pi * lam^2)^(-3/4).

Writing delta = lam / sqrt(lam^2 + 1), the population mean and variance are
mu + sigma*delta*sqrt(2/pi) and sigma^2*(1 - 2*delta^2/pi), giving the CV.

Posterior draws come from a data-augmentation Gibbs sweep built on the
stochastic representation X = mu + sigma*(delta*|Z0| + sqrt(1-delta^2)*Z1):
the latent |Z0| variables have truncated-Normal full conditionals and mu is
conjugate given them, while sigma (on the log scale) and lam are updated by
embedded Metropolis steps whose scales adapt during burn-in.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betaln, log_ndtr, ndtr, ndtri

from ..exceptions import UndefinedCvError, ValidationError
from ..mcmc.diagnostics import ChainReport, summarize_chain
from ..mcmc.sampler import SamplerConfig
from ..rng import rng_stream
from ..samples import Sample
from ..validation import check_count, check_vector
from .base import CvDraws, CvModel

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
#: log of the shape-prior normalising constant sqrt(pi)/B(1/4, 1/2)
_SHAPE_PRIOR_LOG_NORM = 0.5 * math.log(math.pi) - betaln(0.25, 0.5)

_DEFAULT = dict(n_iterations=600_000, burn_in=60_000, thin=18)
_GIBBS_TARGET_ACCEPTANCE = 0.35


def shape_prior_logpdf(lam):
    """Log density of the generalised-t shape prior (normalised)."""
    lam = np.asarray(lam, dtype=float)
    out = _SHAPE_PRIOR_LOG_NORM - 0.75 * np.log1p(math.pi * lam * lam)
    return float(out) if out.ndim == 0 else out


def _check_raw(sample: Sample) -> np.ndarray:
    if not sample.has_values:
        raise ValidationError("skew-normal model needs raw observations")
    if sample.n < 3:
        raise ValidationError("skew-normal model needs n >= 3")
    return check_vector(sample.values, "values", min_length=3)


def skewnormal_log_posterior(mu, sigma, lam, sample: Sample) -> float:
    """Unnormalised log posterior at (mu, sigma, lam).

    The Phi factor is evaluated through a numerically stable log-CDF, so
    deep negative arguments do not underflow to log(0).
    """
    x = _check_raw(sample)
    if sigma <= 0:
        raise ValidationError("sigma must be > 0")
    n = x.size
    z = (x - mu) / sigma
    return float(
        -(n + 1) * math.log(sigma)
        + shape_prior_logpdf(lam)
        - 0.5 * np.dot(z, z)
        - n * _HALF_LOG_2PI
        + log_ndtr(lam * z).sum()
    )


def skewnormal_log_posterior_grad(mu, sigma, lam, sample: Sample) -> np.ndarray:
    """Gradient of :func:`skewnormal_log_posterior` wrt (mu, sigma, lam)."""
    x = _check_raw(sample)
    n = x.size
    z = (x - mu) / sigma
    # inverse Mills ratio phi(u)/Phi(u), stable in the deep tail
    u = lam * z
    mills = np.exp(-0.5 * u * u - _HALF_LOG_2PI - log_ndtr(u))
    d_mu = (z.sum() - lam * mills.sum()) / sigma
    d_sigma = (-(n + 1) + np.dot(z, z) - lam * np.dot(z, mills)) / sigma
    d_lam = -1.5 * math.pi * lam / (1.0 + math.pi * lam * lam) + np.dot(z, mills)
    return np.array([d_mu, d_sigma, d_lam])


def cv_skewnormal(mu, sigma, lam):
    """CV from (mu, sigma, lam) via delta = lam/sqrt(lam^2 + 1)."""
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    lam = np.asarray(lam, dtype=float)
    delta = lam / np.sqrt(lam * lam + 1.0)
    mean = mu + sigma * delta * math.sqrt(2.0 / math.pi)
    if np.any(mean == 0.0):
        raise UndefinedCvError("CV is undefined: population mean is zero")
    out = np.sqrt(sigma * sigma * (1.0 - 2.0 * delta * delta / math.pi)) / np.abs(mean)
    return float(out) if out.ndim == 0 else out


def _moment_start(x: np.ndarray) -> tuple[float, float, float]:
    """Method-of-moments (mu, sigma, lam) from the sample skewness."""
    mean = float(x.mean())
    sd = float(x.std(ddof=0))
    if sd == 0.0:
        raise ValidationError("degenerate sample: sd must be > 0")
    skew = float(np.mean(((x - mean) / sd) ** 3))
    max_skew = 0.5 * (4.0 - math.pi) * (2.0 / math.pi) ** 1.5 / (1.0 - 2.0 / math.pi) ** 1.5
    r = min(abs(skew), 0.95 * max_skew)
    r23 = (2.0 * r / (4.0 - math.pi)) ** (2.0 / 3.0)
    delta = math.copysign(math.sqrt(0.5 * math.pi * r23 / (r23 + 1.0)), skew)
    delta = max(min(delta, 0.995), -0.995)
    lam0 = delta / math.sqrt(1.0 - delta * delta)
    sigma0 = sd / math.sqrt(1.0 - 2.0 * delta * delta / math.pi)
    mu0 = mean - sigma0 * delta * math.sqrt(2.0 / math.pi)
    return mu0, sigma0, lam0


def _truncated_normal_nonneg(mean, sd, unif) -> np.ndarray:
    """Inverse-CDF draws from Normal(mean, sd^2) truncated to [0, inf)."""
    unif = np.maximum(unif, 1e-300)  # a uniform of exactly 0 would map to +inf
    cap = ndtr(mean / sd)
    with np.errstate(divide="ignore"):
        t = mean - sd * ndtri(unif * cap)
    # cap underflows once mean/sd < -39; fall back to the exponential tail
    far = cap == 0.0
    if np.any(far):
        t = np.where(far, -np.log(unif) * sd * sd / np.abs(mean), t)
    return np.maximum(t, 0.0)


def gibbs_skewnormal(
    sample: Sample,
    config: SamplerConfig,
    seed,
    diagnostics: bool = True,
) -> tuple[np.ndarray, ChainReport | None]:
    """Gibbs sweep over (latents, mu, sigma, lam); draws are (mu, sigma, lam).

    ``config.step_scales`` holds the two Metropolis step sizes (log-sigma
    step, lam step); they adapt toward the configured target acceptance
    during burn-in and stay frozen afterwards.  The reported acceptance rate
    averages the two embedded Metropolis steps post burn-in.
    """
    x = _check_raw(sample)
    n = x.size
    sum_x = float(x.sum())
    rng = rng_stream(seed)

    if config.initial_point is not None:
        mu, sigma, lam = (float(v) for v in config.initial_point)
    else:
        mu, sigma, lam = _moment_start(x)
    scales = np.broadcast_to(np.asarray(config.step_scales, dtype=float), (2,)).copy()
    if np.any(scales <= 0):
        raise ValidationError("step_scales must be strictly positive")
    log_sigma_scale, lam_scale = scales
    target = config.target_acceptance

    n_iter, burn_in, thin = config.n_iterations, config.burn_in, config.thin
    n_ret = config.n_retained
    draws = np.empty((n_ret, 3))
    kept = 0
    accepted = np.zeros(2)

    def lam_logdens(lam_val, sigma_val, s_rr, s_rt, s_tt):
        one_minus_d2 = 1.0 / (1.0 + lam_val * lam_val)
        d = lam_val * math.sqrt(one_minus_d2)
        ssr = s_rr - 2.0 * sigma_val * d * s_rt + sigma_val * sigma_val * d * d * s_tt
        return (
            shape_prior_logpdf(lam_val)
            - 0.5 * n * math.log(one_minus_d2)
            - ssr / (2.0 * sigma_val * sigma_val * one_minus_d2)
        )

    for t_iter in range(n_iter):
        one_minus_d2 = 1.0 / (1.0 + lam * lam)
        delta = lam * math.sqrt(one_minus_d2)

        # latent scores: truncated Normal(delta * z_i, 1 - delta^2) on [0, inf)
        z = (x - mu) / sigma
        lat = _truncated_normal_nonneg(delta * z, math.sqrt(one_minus_d2), rng.random(n))
        s_t = float(lat.sum())
        s_tt = float(np.dot(lat, lat))
        s_xt = float(np.dot(x, lat))

        # mu: conjugate Normal given the latents
        mu = (sum_x - sigma * delta * s_t) / n + math.sqrt(
            sigma * sigma * one_minus_d2 / n
        ) * rng.standard_normal()

        s_rr = float(np.dot(x - mu, x - mu))
        s_rt = s_xt - mu * s_t

        # sigma: Metropolis on log sigma (prior 1/sigma + Jacobian give -n log sigma)
        def sigma_logdens(sig):
            ssr = s_rr - 2.0 * sig * delta * s_rt + sig * sig * delta * delta * s_tt
            return -n * math.log(sig) - ssr / (2.0 * sig * sig * one_minus_d2)

        log_sigma_prop = math.log(sigma) + log_sigma_scale * rng.standard_normal()
        log_ratio = sigma_logdens(math.exp(log_sigma_prop)) - sigma_logdens(sigma)
        accept_prob = math.exp(min(log_ratio, 0.0))
        if rng.random() < accept_prob:
            sigma = math.exp(log_sigma_prop)
            if t_iter >= burn_in:
                accepted[0] += 1
        if t_iter < burn_in and config.adapt:
            gain = (t_iter + 1) ** -0.7
            log_sigma_scale *= math.exp(gain * (accept_prob - target))

        # lam: Metropolis under the heavy-tailed shape prior
        lam_prop = lam + lam_scale * rng.standard_normal()
        log_ratio = lam_logdens(lam_prop, sigma, s_rr, s_rt, s_tt) - lam_logdens(
            lam, sigma, s_rr, s_rt, s_tt
        )
        accept_prob = math.exp(min(log_ratio, 0.0))
        if rng.random() < accept_prob:
            lam = lam_prop
            if t_iter >= burn_in:
                accepted[1] += 1
        if t_iter < burn_in and config.adapt:
            gain = (t_iter + 1) ** -0.7
            lam_scale *= math.exp(gain * (accept_prob - target))

        if t_iter >= burn_in and (t_iter - burn_in) % thin == 0 and kept < n_ret:
            draws[kept] = (mu, sigma, lam)
            kept += 1

    report = None
    if diagnostics:
        report = summarize_chain(
            draws,
            kind="gibbs",
            acceptance_rate=float(accepted.mean()) / (n_iter - burn_in),
            param_names=("mu", "sigma", "lam"),
            step_scales=np.array([log_sigma_scale, lam_scale]),
        )
    return draws, report


class SkewNormalModel(CvModel):
    name = "skewnormal"
    param_names = ("mu", "sigma", "lam")
    needs_raw_values = True

    def validate_sample(self, sample: Sample) -> None:
        x = _check_raw(sample)
        if float(x.std(ddof=0)) == 0.0:
            raise ValidationError("degenerate sample: sd must be > 0")

    def default_config(self, sample: Sample) -> SamplerConfig:
        x = _check_raw(sample)
        return SamplerConfig(
            initial_point=_moment_start(x),
            step_scales=(3.0 / math.sqrt(sample.n), 1.0),
            target_acceptance=_GIBBS_TARGET_ACCEPTANCE,
            **_DEFAULT,
        )

    def _resize(self, config: SamplerConfig, n_draws: int) -> SamplerConfig:
        return config.override(n_iterations=config.burn_in + config.thin * n_draws)

    def cv_draws(self, sample, n_draws=None, seed=None, config=None, diagnostics=True):
        self.validate_sample(sample)
        if config is None:
            config = self.default_config(sample)
            if n_draws is not None:
                config = self._resize(config, check_count(n_draws, "n_draws", minimum=1))
        draws, report = gibbs_skewnormal(sample, config, seed, diagnostics=diagnostics)
        mu, sigma, lam = draws[:, 0], draws[:, 1], draws[:, 2]
        delta = lam / np.sqrt(lam * lam + 1.0)
        mean = mu + sigma * delta * math.sqrt(2.0 / math.pi)
        keep = mean != 0.0
        n_rejected = int(np.count_nonzero(~keep))
        self._warn_rejections(n_rejected, draws.shape[0])
        values = np.sqrt(
            sigma[keep] ** 2 * (1.0 - 2.0 * delta[keep] ** 2 / math.pi)
        ) / np.abs(mean[keep])
        return (
            CvDraws(values=values, n_rejected=n_rejected,
                    param_draws=draws, param_names=("mu", "sigma", "lam")),
            report,
        )

    def simulate(self, params, n, rng):
        lam = params["lam"]
        delta = lam / math.sqrt(lam * lam + 1.0)
        z0 = np.abs(rng.standard_normal(n))
        z1 = rng.standard_normal(n)
        return params["mu"] + params["sigma"] * (
            delta * z0 + math.sqrt(1.0 - delta * delta) * z1
        )

    def true_cv(self, params):
        return cv_skewnormal(params["mu"], params["sigma"], params["lam"])
