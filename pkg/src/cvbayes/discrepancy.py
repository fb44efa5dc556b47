"""Discrepancy measure for a precise hypothesis, estimated from posterior draws.

Given draws of a scalar functional and a hypothesised value h, the measure is

    discrepancy = 1 - 2 * min(P(theta < h | data), P(theta > h | data)),

the posterior evidence that h sits away from the centre of the posterior:
0 when h is at the posterior median, approaching 1 when nearly all mass lies
on one side.  Probabilities are estimated by Monte Carlo integration, i.e.
by counting draws on each side of h, which makes the estimate exactly
invariant under strictly increasing reparametrisations and under permutation
of the draws.

Draws exactly equal to h are split evenly between the two sides: a
measure-zero event for continuous posteriors, and the splitting keeps the
measure at 0 for the fully degenerate all-tied input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .exceptions import ValidationError
from .validation import check_finite_scalar, check_vector

#: number of grid points for the kernel density used by check_unimodality
_KDE_GRID = 512
#: local maxima need this fraction of the peak density in height and
#: prominence (an isolated extreme draw creates its own negligible-mass bump)
_KDE_MIN_MODE_HEIGHT = 0.01


def as_draws(draws, name: str = "draws") -> np.ndarray:
    """Validate a draw container: 1-d, nonempty, all finite."""
    return check_vector(draws, name, min_length=1)


@dataclass(frozen=True)
class DiscrepancyResult:
    """Outcome of a discrepancy evaluation.

    ``prob_below``/``prob_above`` are the estimated posterior probabilities
    of the functional lying strictly below/above the hypothesis value (ties
    split evenly).  ``mc_se`` is the binomial Monte Carlo standard error of
    ``discrepancy``: the measure is an affine function of the smaller tail
    probability p, so ``mc_se = 2 * sqrt(p * (1 - p) / n_draws)``.
    ``external_side`` names the side carrying the smaller probability
    ("below", "above", or "tie" when the two are equal).
    """

    discrepancy: float
    prob_below: float
    prob_above: float
    mc_se: float
    external_side: str
    n_draws: int
    posterior_median: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.discrepancy <= 1.0):
            raise ValidationError(f"discrepancy outside [0, 1]: {self.discrepancy}")
        if self.prob_below + self.prob_above > 1.0 + 1e-12:
            raise ValidationError("side probabilities exceed 1")


@dataclass(frozen=True)
class UnimodalityReport:
    """Mode count of a kernel density estimate over the draws."""

    mode_count: int
    bandwidth: float
    passed: bool


def discrepancy_from_draws(draws, hypothesis_value, include_median: bool = False) -> DiscrepancyResult:
    """Discrepancy of the hypothesis ``functional == hypothesis_value``.

    ``draws`` are equally weighted posterior draws of the scalar functional.
    The posterior median is only computed (by order statistics) when
    ``include_median`` is requested; the measure itself never needs it.
    """
    values = as_draws(draws)
    h = check_finite_scalar(hypothesis_value, "hypothesis_value")
    n = values.size
    n_below = int(np.count_nonzero(values < h))
    n_above = int(np.count_nonzero(values > h))
    n_equal = n - n_below - n_above
    prob_below = (n_below + 0.5 * n_equal) / n
    prob_above = (n_above + 0.5 * n_equal) / n
    smaller = min(prob_below, prob_above)
    discrepancy = min(1.0, max(0.0, 1.0 - 2.0 * smaller))
    if prob_below < prob_above:
        side = "below"
    elif prob_above < prob_below:
        side = "above"
    else:
        side = "tie"
    return DiscrepancyResult(
        discrepancy=discrepancy,
        prob_below=prob_below,
        prob_above=prob_above,
        mc_se=2.0 * float(np.sqrt(smaller * (1.0 - smaller) / n)),
        external_side=side,
        n_draws=n,
        posterior_median=float(np.median(values)) if include_median else None,
    )


def discrepancy_of_difference(draws1, draws2, include_median: bool = False) -> DiscrepancyResult:
    """Discrepancy of ``functional_1 == functional_2`` from two draw streams.

    The streams come from independent populations, so pairing them
    arbitrarily is valid; they are truncated to the common length and the
    measure is evaluated on the paired differences against 0.
    """
    a = as_draws(draws1, "draws1")
    b = as_draws(draws2, "draws2")
    m = min(a.size, b.size)
    return discrepancy_from_draws(a[:m] - b[:m], 0.0, include_median=include_median)


def check_unimodality(draws, min_draws: int = 100) -> UnimodalityReport:
    """Count modes of a Gaussian-kernel density estimate of the draws.

    Density is evaluated on a 512-point grid spanning [min, max] (linear
    binning plus kernel convolution) with Silverman's rule-of-thumb
    bandwidth.  A mode is a local maximum (endpoints included) with height
    and prominence of at least 1% of the peak density; the floor discards
    the negligible-mass ripples that isolated tail draws produce.
    ``passed`` is true for exactly one mode.
    """
    values = as_draws(draws)
    if values.size < min_draws:
        raise ValidationError(
            f"unimodality check needs at least {min_draws} draws, got {values.size}"
        )
    lo, hi = float(values.min()), float(values.max())
    sd = float(values.std(ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) or sd
    if spread <= 0 or hi == lo:
        # all draws (essentially) identical: a point mass has one mode
        return UnimodalityReport(mode_count=1, bandwidth=max(abs(lo), 1.0) * 1e-6, passed=True)
    bandwidth = 0.9 * spread * values.size ** (-0.2)

    step = (hi - lo) / (_KDE_GRID - 1)
    pos = (values - lo) / step
    left = np.minimum(pos.astype(int), _KDE_GRID - 2)
    frac = pos - left
    weights = np.zeros(_KDE_GRID)
    np.add.at(weights, left, 1.0 - frac)
    np.add.at(weights, left + 1, frac)
    radius = int(np.ceil(6.0 * bandwidth / step))
    kernel = np.exp(-0.5 * (np.arange(-radius, radius + 1) * step / bandwidth) ** 2)
    density = np.convolve(weights, kernel, mode="same")

    floor = _KDE_MIN_MODE_HEIGHT * density.max()
    padded = np.concatenate([[-1.0], density, [-1.0]])  # lets endpoints count
    peaks, _ = find_peaks(padded, height=floor, prominence=floor)
    mode_count = max(int(peaks.size), 1)
    return UnimodalityReport(mode_count=mode_count, bandwidth=bandwidth, passed=mode_count == 1)
