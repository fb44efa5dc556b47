"""End-to-end two-population comparison: data in, discrepancy report out.

This is the functional core behind both the estimator and the CLI.  Each
population gets its own posterior CV draw stream (independent seeded
substreams of the master seed), the discrepancy of the paired differences
against zero is evaluated, the difference distribution is checked for
unimodality, and every MCMC chain goes through the convergence gate.  The
comparison never applies a conformity threshold: it reports evidence and
leaves the decision to the caller.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .__about__ import __version__
from .discrepancy import DiscrepancyResult, UnimodalityReport, check_unimodality, discrepancy_of_difference
from .mcmc.diagnostics import ChainReport, GateThresholds, convergence_gate
from .mcmc.sampler import SamplerConfig
from .models import CvModel, get_model
from .rng import rng_stream
from .samples import Sample


@dataclass
class PopulationSummary:
    """Per-population slice of a comparison report."""

    label: str
    n: int
    mean: float
    sd: float
    cv_estimate: float
    n_cv_draws: int
    n_rejected_draws: int
    chain: ChainReport | None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "mean": self.mean,
            "sd": self.sd,
            "cv_estimate": self.cv_estimate,
            "n_cv_draws": self.n_cv_draws,
            "n_rejected_draws": self.n_rejected_draws,
            "chain": None if self.chain is None else self.chain.summary_dict(),
        }


@dataclass
class ComparisonReport:
    """Everything a run of :func:`compare_samples` produced."""

    model: str
    result: DiscrepancyResult
    populations: tuple[PopulationSummary, PopulationSummary]
    unimodality: UnimodalityReport
    converged: bool
    seed: int | None
    config_echo: dict = field(default_factory=dict)
    #: per-population CvDraws (CV values + sampler coordinates), kept on request
    population_draws: tuple | None = None

    @property
    def discrepancy(self) -> float:
        return self.result.discrepancy

    def to_dict(self, timestamp: str | None = None) -> dict:
        payload = {
            "schema_version": "1",
            "generated_by": {"package": "cvbayes", "version": __version__},
            "model": self.model,
            "seed": self.seed,
            "discrepancy": self.result.discrepancy,
            "prob_below": self.result.prob_below,
            "prob_above": self.result.prob_above,
            "mc_se": self.result.mc_se,
            "external_side": self.result.external_side,
            "n_draws": self.result.n_draws,
            "converged": self.converged,
            "populations": [p.to_dict() for p in self.populations],
            "difference_unimodality": {
                "mode_count": self.unimodality.mode_count,
                "bandwidth": self.unimodality.bandwidth,
                "passed": self.unimodality.passed,
            },
            "config": self.config_echo,
        }
        if timestamp is not None:
            payload["timestamp"] = timestamp
        return payload


def _population_task(args):
    model, sample, n_draws, config, seed_parts = args
    seed = rng_stream(*seed_parts) if seed_parts is not None else None
    return model.cv_draws(sample, n_draws=n_draws, seed=seed, config=config)


def compare_samples(
    sample1: Sample,
    sample2: Sample,
    model: str | CvModel = "normal",
    n_draws: int | None = None,
    seed: int | None = None,
    config: SamplerConfig | None = None,
    sampler_overrides: dict | None = None,
    gate_thresholds: GateThresholds | None = None,
    keep_draws: bool = False,
    labels: tuple[str, str] = ("1", "2"),
    workers: int = 1,
) -> ComparisonReport:
    """Evaluate the equal-CV hypothesis for two independent samples.

    ``sampler_overrides`` (keys among n_iterations, burn_in, thin,
    target_acceptance) tweak the model's default MCMC configuration when no
    full ``config`` is given.  ``workers > 1`` samples the two populations
    in parallel processes; results are identical to the serial run because
    each population owns a fixed substream of the master seed.  The
    returned report carries ``converged``: True when every population's
    chain passed the convergence gate (conjugate draws pass trivially).
    """
    if isinstance(model, str):
        model = get_model(model)
    model.validate_sample(sample1)
    model.validate_sample(sample2)

    tasks = []
    for index, sample in enumerate((sample1, sample2)):
        pop_config = config
        if pop_config is None and sampler_overrides and model.uses_mcmc:
            pop_config = model.default_config(sample).override(**sampler_overrides)
        seed_parts = (seed, 0, index) if seed is not None else None
        tasks.append((model, sample, n_draws, pop_config, seed_parts))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=2) as pool:
            outcomes = list(pool.map(_population_task, tasks))
    else:
        outcomes = [_population_task(t) for t in tasks]

    populations = []
    draw_arrays = []
    converged = True
    for (draws, chain), sample, label in zip(outcomes, (sample1, sample2), labels):
        if chain is not None:
            converged = convergence_gate(chain, gate_thresholds) and converged
        populations.append(
            PopulationSummary(
                label=label,
                n=sample.n,
                mean=sample.mean,
                sd=sample.sd,
                cv_estimate=sample.cv_estimate,
                n_cv_draws=int(draws.values.size),
                n_rejected_draws=draws.n_rejected,
                chain=chain,
            )
        )
        draw_arrays.append(draws.values)

    result = discrepancy_of_difference(draw_arrays[0], draw_arrays[1])
    m = min(arr.size for arr in draw_arrays)
    unimodality = check_unimodality(draw_arrays[0][:m] - draw_arrays[1][:m])
    return ComparisonReport(
        model=model.name,
        result=result,
        populations=(populations[0], populations[1]),
        unimodality=unimodality,
        converged=converged,
        seed=seed,
        config_echo={
            "n_draws": n_draws,
            "sampler_overrides": sampler_overrides,
            "workers": workers,
        },
        population_draws=tuple(d for d, _ in outcomes) if keep_draws else None,
    )
