"""Scikit-learn style estimator wrapping the two-population comparison."""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator

from .compare import compare_samples
from .exceptions import ValidationError
from .mcmc.diagnostics import GateThresholds
from .samples import Sample
from .validation import check_group_labels, check_vector


class CvDiscrepancy(BaseEstimator):
    """Bayesian evidence that two populations share a coefficient of variation.

    The estimator fits the chosen distributional model to each group, draws
    from the joint posterior of the two CVs and reports the discrepancy
    measure of the hypothesis cv_1 == cv_2 (0: the hypothesis sits at the
    centre of the posterior; 1: it lies entirely in one tail).  It follows
    the scikit-learn conventions (``get_params``/``set_params``, ``fit``
    returning ``self``, learned attributes with trailing underscores) so it
    clones and composes with the wider ecosystem; no conformity threshold is
    applied, interpreting the evidence is up to the caller.

    Parameters
    ----------
    model : str, default "normal"
        One of "normal", "invgauss", "skewnormal", "negbin".
    n_draws : int or None, default 10_000
        Posterior CV draws per group.  For MCMC-backed models this resizes
        the default chain; None keeps the model's default run length.
    seed : int or None
        Master seed; each group gets an independent substream.
    n_iterations, burn_in, thin : int or None
        Optional MCMC overrides (ignored by the conjugate Normal model).
    check_convergence : bool, default True
        Warn when a chain fails the convergence gate.

    Attributes
    ----------
    discrepancy_ : float
        The evidence measure in [0, 1].
    prob_below_, prob_above_ : float
        Posterior probabilities of cv_1 < cv_2 and cv_1 > cv_2.
    mc_se_ : float
        Monte Carlo standard error of ``discrepancy_``.
    converged_ : bool
        True when all chains passed the convergence gate.
    report_ : ComparisonReport
        Full structured report (per-group summaries, chain diagnostics,
        unimodality check of the CV-difference draws).
    """

    def __init__(
        self,
        model: str = "normal",
        n_draws: int | None = 10_000,
        seed: int | None = None,
        n_iterations: int | None = None,
        burn_in: int | None = None,
        thin: int | None = None,
        check_convergence: bool = True,
    ):
        self.model = model
        self.n_draws = n_draws
        self.seed = seed
        self.n_iterations = n_iterations
        self.burn_in = burn_in
        self.thin = thin
        self.check_convergence = check_convergence

    def fit(self, X, y):
        """Fit on a vector of observations ``X`` with two-group labels ``y``."""
        values = check_vector(X, "X", min_length=4)
        in_second, labels = check_group_labels(y)
        if in_second.size != values.size:
            raise ValidationError(
                f"X and y length mismatch: {values.size} != {in_second.size}"
            )
        self.classes_ = np.asarray(labels)
        return self.fit_samples(
            Sample.from_values(values[~in_second]),
            Sample.from_values(values[in_second]),
            labels=(str(labels[0]), str(labels[1])),
        )

    def fit_samples(self, sample1: Sample, sample2: Sample, labels=("1", "2")):
        """Fit from prebuilt :class:`~cvbayes.samples.Sample` objects
        (allows summary-only input for the conjugate Normal model)."""
        overrides = {
            k: v
            for k, v in {
                "n_iterations": self.n_iterations,
                "burn_in": self.burn_in,
                "thin": self.thin,
            }.items()
            if v is not None
        }
        report = compare_samples(
            sample1,
            sample2,
            model=self.model,
            n_draws=self.n_draws,
            seed=self.seed,
            sampler_overrides=overrides or None,
            gate_thresholds=GateThresholds(),
            labels=labels,
        )
        self.report_ = report
        self.discrepancy_ = report.result.discrepancy
        self.prob_below_ = report.result.prob_below
        self.prob_above_ = report.result.prob_above
        self.mc_se_ = report.result.mc_se
        self.external_side_ = report.result.external_side
        self.n_draws_ = report.result.n_draws
        self.converged_ = report.converged
        if self.check_convergence and not report.converged:
            warnings.warn(
                "at least one posterior chain failed the convergence gate; "
                "inspect report_.populations[*].chain",
                RuntimeWarning,
                stacklevel=2,
            )
        return self
