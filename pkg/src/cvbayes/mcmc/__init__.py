"""Markov chain Monte Carlo: samplers, diagnostics and trace export."""

from .diagnostics import (
    ChainReport,
    GateThresholds,
    autocorrelation,
    convergence_gate,
    effective_sample_size,
    geweke_z,
    read_trace_csv,
    summarize_chain,
    write_acf_csv,
    write_trace_csv,
)
from .sampler import MIN_RETAINED, SamplerConfig, rw_metropolis

__all__ = [
    "ChainReport",
    "GateThresholds",
    "MIN_RETAINED",
    "SamplerConfig",
    "autocorrelation",
    "convergence_gate",
    "effective_sample_size",
    "geweke_z",
    "gibbs_skewnormal",
    "read_trace_csv",
    "rw_metropolis",
    "summarize_chain",
    "write_acf_csv",
    "write_trace_csv",
]


def gibbs_skewnormal(sample, config, seed, **kwargs):
    """Data-augmentation Gibbs sampler for the skew-Normal posterior.

    Thin re-export; the implementation lives with the skew-Normal model.
    """
    from ..models.skewnormal import gibbs_skewnormal as _impl

    return _impl(sample, config, seed, **kwargs)
