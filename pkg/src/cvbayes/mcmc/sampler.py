"""Random-walk Metropolis sampling on a user-supplied log density.

Proposals are Gaussian with per-coordinate scales multiplied by a global
factor that is tuned by Robbins-Monro adaptation *during burn-in only*
(target acceptance 0.234 by default); the kernel is frozen from the end of
burn-in onward, so the retained draws come from a fixed Markov kernel.
Everything is deterministic given (seed, config, data).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..exceptions import ValidationError
from ..rng import rng_stream
from ..validation import check_count
from .diagnostics import ChainReport, summarize_chain

#: minimum number of retained draws a configuration must produce
MIN_RETAINED = 1000


@dataclass(frozen=True)
class SamplerConfig:
    """Run-length, proposal and adaptation settings for one chain."""

    n_iterations: int
    burn_in: int = 0
    thin: int = 1
    initial_point: tuple[float, ...] | None = None
    step_scales: tuple[float, ...] | float = 1.0
    adapt: bool = True
    target_acceptance: float = 0.234

    def __post_init__(self):
        check_count(self.n_iterations, "n_iterations", minimum=1)
        check_count(self.burn_in, "burn_in", minimum=0)
        check_count(self.thin, "thin", minimum=1)
        if self.burn_in >= self.n_iterations:
            raise ValidationError("burn_in must be smaller than n_iterations")
        if not 0.0 < self.target_acceptance < 1.0:
            raise ValidationError("target_acceptance must be in (0, 1)")
        if self.n_retained < MIN_RETAINED:
            raise ValidationError(
                f"configuration retains {self.n_retained} draws; need >= {MIN_RETAINED}"
            )

    @property
    def n_retained(self) -> int:
        return (self.n_iterations - self.burn_in) // self.thin

    def override(self, **changes) -> "SamplerConfig":
        """Copy with the given fields replaced (None values are ignored)."""
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)


def rw_metropolis(
    log_density,
    config: SamplerConfig,
    seed,
    param_names: tuple[str, ...] | None = None,
    record_scale_trace: bool = False,
) -> tuple[np.ndarray, ChainReport]:
    """Run one random-walk Metropolis chain.

    Parameters
    ----------
    log_density : callable
        Maps a parameter vector (1-d ndarray) to the log of an unnormalised
        target density; must be finite at ``config.initial_point``.
    config : SamplerConfig
        Chain settings; ``initial_point`` is required.
    seed : int, Generator or SeedSequence
        Source of randomness (bit-reproducible for equal seeds).
    param_names : tuple of str, optional
        Coordinate labels recorded in the report.
    record_scale_trace : bool
        Store the per-iteration proposal-scale multiplier in the report
        (used to verify that adaptation freezes after burn-in).

    Returns
    -------
    draws : ndarray of shape (n_retained, n_coords)
    report : ChainReport
    """
    if config.initial_point is None:
        raise ValidationError("config.initial_point is required")
    x = np.asarray(config.initial_point, dtype=float).ravel()
    d = x.size
    scales = np.broadcast_to(np.asarray(config.step_scales, dtype=float), (d,)).copy()
    if np.any(scales <= 0):
        raise ValidationError("step_scales must be strictly positive")

    lp = float(log_density(x))
    if not math.isfinite(lp):
        raise ValidationError(f"log density is not finite at the initial point ({lp})")

    rng = rng_stream(seed)
    n_iter, burn_in, thin = config.n_iterations, config.burn_in, config.thin
    increments = rng.standard_normal((n_iter, d))
    log_unif = np.log(rng.random(n_iter))

    n_ret = config.n_retained
    draws = np.empty((n_ret, d))
    scale_trace = np.empty(n_iter) if record_scale_trace else None
    log_mult = 0.0
    kept = 0
    accepted_post = 0
    for t in range(n_iter):
        proposal = x + math.exp(log_mult) * scales * increments[t]
        lp_prop = float(log_density(proposal))
        log_ratio = lp_prop - lp
        if log_unif[t] < log_ratio:
            x = proposal
            lp = lp_prop
            if t >= burn_in:
                accepted_post += 1
        if t < burn_in:
            if config.adapt:
                accept_prob = math.exp(min(log_ratio, 0.0))
                log_mult += (t + 1) ** -0.7 * (accept_prob - config.target_acceptance)
        elif (t - burn_in) % thin == 0 and kept < n_ret:
            draws[kept] = x
            kept += 1
        if record_scale_trace:
            scale_trace[t] = math.exp(log_mult)

    report = summarize_chain(
        draws,
        kind="metropolis",
        acceptance_rate=accepted_post / (n_iter - burn_in),
        param_names=param_names,
        step_scales=math.exp(log_mult) * scales,
        scale_trace=scale_trace,
    )
    return draws, report
