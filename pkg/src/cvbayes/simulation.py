"""Replication harness: repeated-sampling studies of the discrepancy measure.

Three study types share one engine that replays the full pipeline
(simulate two samples -> posterior CV draws -> discrepancy) many times:

* false non-conformity rate (FNCR): equal true CVs; the fraction of
  replications whose discrepancy exceeds each threshold,
* uniformity: equal true CVs; Kolmogorov-Smirnov test of the replicated
  discrepancies against Uniform(0, 1),
* consistency: distinct true CVs; the median discrepancy per sample size,
  expected to approach 1 as samples grow.

A frequentist baseline is provided by a recentred percentile bootstrap test
for the difference of sample CVs.

Replication r of sample-size cell c uses random substreams keyed by
(c, r, purpose), so results are independent of execution order and of the
worker count.  Study grids can be read from TOML files; results export to
CSV (one row per cell) and JSON.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .discrepancy import discrepancy_of_difference
from .exceptions import ValidationError
from .models import CvModel, get_model
from .rng import rng_stream
from .samples import Sample
from .validation import check_count

_SAMPLER_OVERRIDE_KEYS = {"n_iterations", "burn_in", "thin", "target_acceptance"}


@dataclass(frozen=True)
class StudyGrid:
    """Configuration of one replication study."""

    model: str
    params1: dict
    params2: dict
    sample_sizes: tuple[tuple[int, int], ...]
    thresholds: tuple[float, ...]
    n_replications: int
    n_posterior_draws: int
    master_seed: int
    sampler: dict | None = None

    def __post_init__(self):
        get_model(self.model)
        check_count(self.n_replications, "n_replications", minimum=1)
        check_count(self.n_posterior_draws, "n_posterior_draws", minimum=1)
        if not self.sample_sizes:
            raise ValidationError("sample_sizes must not be empty")
        for n1, n2 in self.sample_sizes:
            check_count(n1, "n1", minimum=2)
            check_count(n2, "n2", minimum=2)
        for t in self.thresholds:
            if not 0.0 < t < 1.0:
                raise ValidationError(f"thresholds must be in (0, 1), got {t}")
        if self.sampler is not None:
            extra = set(self.sampler) - _SAMPLER_OVERRIDE_KEYS
            if extra:
                raise ValidationError(f"unknown sampler override keys {sorted(extra)}")

    def true_cvs(self) -> tuple[float, float]:
        model = get_model(self.model)
        return model.true_cv(self.params1), model.true_cv(self.params2)


@dataclass(frozen=True)
class StudyCell:
    n1: int
    n2: int
    threshold: float
    rate: float
    ci_low: float
    ci_high: float
    n_replications: int


@dataclass
class StudyResult:
    """Per-cell rates plus (optionally) the raw discrepancy values."""

    kind: str
    grid: StudyGrid
    cells: list[StudyCell] = field(default_factory=list)
    deltas: dict[tuple[int, int], np.ndarray] | None = None

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["n1", "n2", "threshold", "rate", "ci_low", "ci_high", "n_replications"]
            )
            for c in self.cells:
                writer.writerow(
                    [c.n1, c.n2, c.threshold, c.rate, c.ci_low, c.ci_high, c.n_replications]
                )

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "model": self.grid.model,
            "master_seed": self.grid.master_seed,
            "n_replications": self.grid.n_replications,
            "n_posterior_draws": self.grid.n_posterior_draws,
            "cells": [
                {
                    "n1": c.n1,
                    "n2": c.n2,
                    # consistency cells carry no threshold; JSON has no NaN
                    "threshold": c.threshold if math.isfinite(c.threshold) else None,
                    "rate": c.rate,
                    "ci_low": c.ci_low,
                    "ci_high": c.ci_high,
                }
                for c in self.cells
            ],
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")


def _draw_values(model: CvModel, sample: Sample, n_draws, overrides, seed) -> np.ndarray:
    if model.uses_mcmc and overrides:
        config = model.default_config(sample).override(**overrides)
        draws, _ = model.cv_draws(sample, seed=seed, config=config, diagnostics=False)
    else:
        draws, _ = model.cv_draws(sample, n_draws=n_draws, seed=seed, diagnostics=False)
    return draws.values


def replication_discrepancies(
    model_name: str,
    params1: dict,
    params2: dict,
    n1: int,
    n2: int,
    n_draws: int,
    sampler_overrides: dict | None,
    master_seed: int,
    size_index: int,
    replications,
) -> np.ndarray:
    """Discrepancy values for the given replication indices of one cell."""
    model = get_model(model_name)
    out = np.empty(len(replications))
    for i, rep in enumerate(replications):
        data1 = model.simulate(params1, n1, rng_stream(master_seed, size_index, rep, 0))
        data2 = model.simulate(params2, n2, rng_stream(master_seed, size_index, rep, 1))
        values1 = _draw_values(
            model, Sample.from_values(data1), n_draws, sampler_overrides,
            rng_stream(master_seed, size_index, rep, 2),
        )
        values2 = _draw_values(
            model, Sample.from_values(data2), n_draws, sampler_overrides,
            rng_stream(master_seed, size_index, rep, 3),
        )
        out[i] = discrepancy_of_difference(values1, values2).discrepancy
    return out


def _cell_args(grid: StudyGrid, size_index: int, reps) -> tuple:
    n1, n2 = grid.sample_sizes[size_index]
    return (
        grid.model, grid.params1, grid.params2, n1, n2,
        grid.n_posterior_draws, grid.sampler, grid.master_seed, size_index, reps,
    )


def run_replications(grid: StudyGrid, workers: int = 1) -> dict[tuple[int, int], np.ndarray]:
    """All discrepancy values, keyed by sample-size pair.

    ``workers > 1`` spreads replications over a process pool; results are
    identical to the serial run because every replication owns its seed.
    """
    results: dict[tuple[int, int], np.ndarray] = {}
    for size_index, (n1, n2) in enumerate(grid.sample_sizes):
        reps = range(grid.n_replications)
        if workers > 1:
            n_chunks = min(workers * 4, grid.n_replications)
            bounds = np.linspace(0, grid.n_replications, n_chunks + 1, dtype=int)
            chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(
                    pool.map(_replication_worker, [_cell_args(grid, size_index, c) for c in chunks])
                )
            results[(n1, n2)] = np.concatenate(parts)
        else:
            results[(n1, n2)] = replication_discrepancies(*_cell_args(grid, size_index, reps))
    return results


def _replication_worker(args) -> np.ndarray:
    return replication_discrepancies(*args)


def _binomial_ci(rate: float, n: int) -> tuple[float, float]:
    half = 1.96 * math.sqrt(max(rate * (1.0 - rate), 0.0) / n)
    return max(rate - half, 0.0), min(rate + half, 1.0)


def _require_equal_cvs(grid: StudyGrid) -> None:
    cv1, cv2 = grid.true_cvs()
    if abs(cv1 - cv2) > 1e-12 * max(abs(cv1), abs(cv2), 1.0):
        raise ValidationError(
            f"study requires equal true CVs, got {cv1:.6g} and {cv2:.6g}"
        )


def run_fncr_study(grid: StudyGrid, workers: int = 1, keep_deltas: bool = False) -> StudyResult:
    """False non-conformity rates: P(discrepancy > threshold) under a true
    equal-CV hypothesis, per sample-size cell and threshold."""
    _require_equal_cvs(grid)
    deltas = run_replications(grid, workers=workers)
    result = StudyResult(kind="fncr", grid=grid, deltas=deltas if keep_deltas else None)
    for (n1, n2), values in deltas.items():
        for threshold in grid.thresholds:
            rate = float(np.mean(values > threshold))
            lo, hi = _binomial_ci(rate, values.size)
            result.cells.append(
                StudyCell(n1, n2, threshold, rate, lo, hi, values.size)
            )
    return result


def run_consistency_study(grid: StudyGrid, workers: int = 1) -> StudyResult:
    """Median discrepancy per sample size under distinct true CVs (raw
    values retained; the median should grow toward 1 with sample size)."""
    cv1, cv2 = grid.true_cvs()
    if abs(cv1 - cv2) <= 1e-12 * max(abs(cv1), abs(cv2), 1.0):
        raise ValidationError("consistency study requires distinct true CVs")
    deltas = run_replications(grid, workers=workers)
    result = StudyResult(kind="consistency", grid=grid, deltas=deltas)
    for (n1, n2), values in deltas.items():
        median = float(np.median(values))
        result.cells.append(
            StudyCell(n1, n2, float("nan"), median, median, median, values.size)
        )
    return result


def run_uniformity_check(
    grid: StudyGrid, workers: int = 1, min_replications: int = 2000
) -> tuple[float, float]:
    """KS statistic and p-value of the replicated discrepancies vs U(0, 1)."""
    if grid.n_replications < min_replications:
        raise ValidationError(
            f"uniformity check needs >= {min_replications} replications, "
            f"got {grid.n_replications}"
        )
    _require_equal_cvs(grid)
    deltas = run_replications(grid, workers=workers)
    values = np.concatenate(list(deltas.values()))
    ks = stats.kstest(values, "uniform")
    return float(ks.statistic), float(ks.pvalue)


def bootstrap_cv_test(
    sample1: Sample,
    sample2: Sample,
    n_boot: int = 500,
    seed=None,
    max_redraws: int = 100,
) -> float:
    """Recentred percentile bootstrap p-value for equal CVs.

    The statistic is the difference of plug-in sample CVs (sd with the
    divide-by-(n-1) convention over |mean|).  Each group is resampled with
    replacement; the bootstrap differences are recentred at zero by
    subtracting the observed difference, and the two-sided p-value is the
    smoothed fraction (count + 1)/(n_boot + 1) of recentred differences at
    least as extreme as the observed one.  Resamples with a numerically
    zero mean are redrawn (up to ``max_redraws`` attempts each).
    """
    n_boot = check_count(n_boot, "n_boot", minimum=100)
    for s in (sample1, sample2):
        if not s.has_values:
            raise ValidationError("bootstrap test needs raw values for both samples")
        if s.mean == 0:
            raise ValidationError("bootstrap CV test is undefined for zero-mean data")
    rng = rng_stream(seed)

    def boot_cvs(values: np.ndarray) -> np.ndarray:
        n = values.size
        cvs = np.empty(n_boot)
        pending = np.arange(n_boot)
        attempts = 0
        while pending.size:
            if attempts > max_redraws:
                raise ValidationError(
                    "bootstrap resampling kept producing zero-mean resamples"
                )
            idx = rng.integers(0, n, size=(pending.size, n))
            picks = values[idx]
            means = picks.mean(axis=1)
            sds = picks.std(axis=1, ddof=1)
            ok = np.abs(means) > 1e-12 * max(1.0, float(np.abs(values).max()))
            cvs[pending[ok]] = sds[ok] / np.abs(means[ok])
            pending = pending[~ok]
            attempts += 1
        return cvs

    observed = (
        sample1.values.std(ddof=1) / abs(sample1.mean)
        - sample2.values.std(ddof=1) / abs(sample2.mean)
    )
    diffs = boot_cvs(sample1.values) - boot_cvs(sample2.values)
    count = int(np.count_nonzero(np.abs(diffs - observed) >= abs(observed)))
    return (count + 1) / (n_boot + 1)


def bootstrap_false_positive_rate(
    model_name: str,
    params1: dict,
    params2: dict,
    n1: int,
    n2: int,
    level: float,
    n_replications: int,
    n_boot: int = 500,
    master_seed: int = 0,
    workers: int = 1,
) -> float:
    """Rejection rate of :func:`bootstrap_cv_test` at the given level over
    replicated equal-CV data (frequentist baseline for the FNCR study)."""
    reps = range(n_replications)
    args = (model_name, params1, params2, n1, n2, level, n_boot, master_seed)
    if workers > 1:
        bounds = np.linspace(0, n_replications, min(workers * 4, n_replications) + 1, dtype=int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_bootstrap_worker, [(*args, c) for c in chunks]))
        rejections = int(np.sum(parts))
    else:
        rejections = _bootstrap_worker((*args, reps))
    return rejections / n_replications


def _bootstrap_worker(args) -> int:
    model_name, params1, params2, n1, n2, level, n_boot, master_seed, reps = args
    model = get_model(model_name)
    rejections = 0
    for rep in reps:
        data1 = model.simulate(params1, n1, rng_stream(master_seed, 0, rep, 0))
        data2 = model.simulate(params2, n2, rng_stream(master_seed, 0, rep, 1))
        p = bootstrap_cv_test(
            Sample.from_values(data1),
            Sample.from_values(data2),
            n_boot=n_boot,
            seed=rng_stream(master_seed, 0, rep, 2),
        )
        rejections += p <= level
    return rejections


def load_grid(path, full_scale: bool = False) -> StudyGrid:
    """Read a study grid from TOML (see the bundled grid for the format).

    ``full_scale=True`` applies the optional [full_scale] overrides
    (typically a larger replication count and more posterior draws).
    """
    path = Path(path)
    try:
        payload = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"{path}: TOML parse error: {exc}") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        study = dict(payload["study"])
        params1 = dict(payload["population1"])
        params2 = dict(payload["population2"])
    except KeyError as exc:
        raise ValidationError(f"{path}: missing required table {exc}") from exc
    if full_scale:
        study.update(payload.get("full_scale", {}))
    try:
        return StudyGrid(
            model=study["model"],
            params1=params1,
            params2=params2,
            sample_sizes=tuple((int(a), int(b)) for a, b in study["sample_sizes"]),
            thresholds=tuple(float(t) for t in study.get("thresholds", ())),
            n_replications=int(study["n_replications"]),
            n_posterior_draws=int(study["n_posterior_draws"]),
            master_seed=int(study["master_seed"]),
            sampler=payload.get("sampler"),
        )
    except KeyError as exc:
        raise ValidationError(f"{path}: missing study key {exc}") from exc
