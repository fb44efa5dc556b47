"""Uniform interface over the four distributional back-ends.

Each model supplies data validation, a way to turn one sample into posterior
draws of its coefficient of variation (conjugate sampling or MCMC on its
non-informative-prior log posterior), synthetic data generation for the
simulation harness, and the CV as a function of the model parameters.
"""

from __future__ import annotations

import abc
import warnings
from dataclasses import dataclass

import numpy as np

from ..mcmc.diagnostics import ChainReport
from ..mcmc.sampler import SamplerConfig
from ..samples import Sample

#: warn when more than this fraction of posterior draws has an undefined CV
REJECTION_WARN_FRACTION = 1e-3


@dataclass(frozen=True)
class CvDraws:
    """Posterior CV draws for one population.

    ``n_rejected`` counts draws discarded because the CV was undefined there
    (population mean exactly zero); a non-negligible fraction signals that
    the CV itself is ill-posed for the data at hand.  ``param_draws`` holds
    the underlying sampler coordinates (one row per retained draw, matching
    the chain report) for trace export.
    """

    values: np.ndarray
    n_rejected: int = 0
    param_draws: np.ndarray | None = None
    param_names: tuple[str, ...] | None = None


class CvModel(abc.ABC):
    """One distributional assumption for the observed populations."""

    name: str
    param_names: tuple[str, ...]
    #: whether raw observations are required (False: summaries suffice)
    needs_raw_values: bool
    #: False for conjugate back-ends that sample the posterior directly
    uses_mcmc: bool = True

    @abc.abstractmethod
    def validate_sample(self, sample: Sample) -> None:
        """Raise ValidationError if the sample is not legal for this model."""

    @abc.abstractmethod
    def cv_draws(
        self,
        sample: Sample,
        n_draws: int | None = None,
        seed=None,
        config: SamplerConfig | None = None,
        diagnostics: bool = True,
    ) -> tuple[CvDraws, ChainReport | None]:
        """Posterior draws of the CV for one population.

        MCMC-backed models take their run length from ``config`` (falling
        back to :meth:`default_config`); ``n_draws``, when given without a
        config, resizes the default run to retain about that many draws.
        """

    @abc.abstractmethod
    def simulate(self, params: dict, n: int, rng) -> np.ndarray:
        """Draw a synthetic sample of size n with the given true parameters."""

    @abc.abstractmethod
    def true_cv(self, params: dict) -> float:
        """CV implied by a true-parameter dict (for study grids)."""

    def default_config(self, sample: Sample) -> SamplerConfig:
        raise NotImplementedError(f"model {self.name!r} does not use MCMC")

    def _warn_rejections(self, n_rejected: int, n_total: int) -> None:
        if n_total and n_rejected / n_total > REJECTION_WARN_FRACTION:
            warnings.warn(
                f"{self.name} model: {n_rejected}/{n_total} posterior draws had an "
                "undefined CV (mean at zero); the comparison may be ill-posed",
                RuntimeWarning,
                stacklevel=3,
            )
