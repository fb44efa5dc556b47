"""The four distributional back-ends and their shared facade."""

from __future__ import annotations

from ..exceptions import ValidationError
from ..mcmc.diagnostics import ChainReport
from ..mcmc.sampler import SamplerConfig
from ..samples import Sample
from .base import CvDraws, CvModel
from .invgauss import (
    InverseGaussianModel,
    cv_invgauss,
    invgauss_log_posterior,
    invgauss_log_posterior_grad,
)
from .negbin import (
    NegativeBinomialModel,
    cv_negbin,
    negbin_log_posterior,
    negbin_log_posterior_grad,
    trigamma,
)
from .normal import (
    NormalGammaParams,
    NormalModel,
    cv_normal,
    normal_gamma_logpdf,
    normal_gamma_logpdf_grad,
    normal_posterior_params,
    sample_normal_gamma,
)
from .skewnormal import (
    SkewNormalModel,
    cv_skewnormal,
    gibbs_skewnormal,
    shape_prior_logpdf,
    skewnormal_log_posterior,
    skewnormal_log_posterior_grad,
)

MODELS: dict[str, type[CvModel]] = {
    NormalModel.name: NormalModel,
    InverseGaussianModel.name: InverseGaussianModel,
    SkewNormalModel.name: SkewNormalModel,
    NegativeBinomialModel.name: NegativeBinomialModel,
}


def get_model(name: str) -> CvModel:
    """Look up a model back-end by name."""
    try:
        return MODELS[name]()
    except KeyError:
        raise ValidationError(
            f"unknown model {name!r}; choose from {sorted(MODELS)}"
        ) from None


def cv_draws(
    model,
    sample: Sample,
    n_draws: int | None = None,
    seed=None,
    config: SamplerConfig | None = None,
    diagnostics: bool = True,
) -> tuple[CvDraws, ChainReport | None]:
    """Posterior CV draws for one population under the named model."""
    if isinstance(model, str):
        model = get_model(model)
    return model.cv_draws(sample, n_draws=n_draws, seed=seed, config=config,
                          diagnostics=diagnostics)


__all__ = [
    "CvDraws",
    "CvModel",
    "InverseGaussianModel",
    "MODELS",
    "NegativeBinomialModel",
    "NormalGammaParams",
    "NormalModel",
    "SkewNormalModel",
    "cv_draws",
    "cv_invgauss",
    "cv_negbin",
    "cv_normal",
    "cv_skewnormal",
    "get_model",
    "gibbs_skewnormal",
    "invgauss_log_posterior",
    "invgauss_log_posterior_grad",
    "negbin_log_posterior",
    "negbin_log_posterior_grad",
    "normal_gamma_logpdf",
    "normal_gamma_logpdf_grad",
    "normal_posterior_params",
    "sample_normal_gamma",
    "shape_prior_logpdf",
    "skewnormal_log_posterior",
    "skewnormal_log_posterior_grad",
    "trigamma",
]
