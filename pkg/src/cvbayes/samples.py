"""Observed-data container with cached sufficient statistics.

A :class:`Sample` holds one population's observations together with the
summaries the model back-ends consume (size, mean, standard deviation,
harmonic mean).  The standard deviation uses the divide-by-n convention
throughout, matching the Normal-model posterior hyperparameter
``rate = n * sd**2 / 2``; published summary tables are taken at face value
under the same convention.

Summary-only samples (no raw values) are supported, since the Normal model
is conjugate in (n, mean, sd) alone; the other models need raw values (the
inverse Gaussian additionally accepts a summary that includes the harmonic
mean).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ValidationError
from .validation import check_count, check_finite_scalar, check_vector


@dataclass(frozen=True, eq=False)
class Sample:
    """One population: raw values (optional) plus cached summaries."""

    n: int
    mean: float
    sd: float
    values: np.ndarray | None = None
    harmonic_mean: float | None = None

    def __post_init__(self):
        check_count(self.n, "n", minimum=2)
        check_finite_scalar(self.mean, "mean")
        check_finite_scalar(self.sd, "sd")
        if self.sd < 0:
            raise ValidationError(f"sd must be >= 0, got {self.sd}")
        if self.values is not None and len(self.values) != self.n:
            raise ValidationError(
                f"n={self.n} does not match {len(self.values)} raw values"
            )
        if self.harmonic_mean is not None:
            check_finite_scalar(self.harmonic_mean, "harmonic_mean")
            if self.harmonic_mean <= 0:
                raise ValidationError("harmonic_mean must be > 0 when given")
            if self.harmonic_mean > self.mean:
                raise ValidationError("harmonic_mean cannot exceed the arithmetic mean")

    @property
    def has_values(self) -> bool:
        return self.values is not None

    @property
    def cv_estimate(self) -> float:
        """Plug-in sample CV, sd / |mean| (undefined at mean 0 -> inf)."""
        if self.mean == 0.0:
            return float("inf")
        return self.sd / abs(self.mean)

    @classmethod
    def from_values(cls, values) -> "Sample":
        arr = check_vector(values, "values", min_length=2)
        harmonic = None
        if np.all(arr > 0):
            harmonic = float(arr.size / np.sum(1.0 / arr))
        return cls(
            n=arr.size,
            mean=float(arr.mean()),
            sd=float(arr.std(ddof=0)),
            values=arr,
            harmonic_mean=harmonic,
        )

    @classmethod
    def from_summary(cls, n, mean, sd, harmonic_mean=None) -> "Sample":
        return cls(n=int(n), mean=float(mean), sd=float(sd), values=None,
                   harmonic_mean=None if harmonic_mean is None else float(harmonic_mean))


def load_values_csv(path) -> Sample:
    """Read a one-column CSV of raw observations (header ``value``)."""
    path = Path(path)
    try:
        lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].split(",")[0].strip().lower() != "value":
        raise ValidationError(f"{path}: expected a one-column CSV with header 'value'")
    try:
        values = [float(ln.split(",")[0]) for ln in lines[1:]]
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric entry ({exc})") from exc
    if len(values) < 2:
        raise ValidationError(f"{path}: need at least two observations")
    return Sample.from_values(values)


def load_summary_json(path) -> Sample:
    """Read a summary-statistics file: JSON object with keys n, mean, sd."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    missing = {"n", "mean", "sd"} - set(payload)
    if missing:
        raise ValidationError(f"{path}: summary file is missing keys {sorted(missing)}")
    return Sample.from_summary(
        payload["n"], payload["mean"], payload["sd"],
        harmonic_mean=payload.get("harmonic_mean"),
    )


def load_sample(path) -> Sample:
    """Dispatch on extension: .json summaries, anything else raw CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_summary_json(path)
    return load_values_csv(path)
