"""Input validation helpers.

Small checks shared by the estimator, the model back-ends and the CLI.
All of them raise :class:`~cvbayes.exceptions.ValidationError` so callers
can map bad input to a single error path.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import ValidationError


def check_finite_scalar(value, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def check_positive_scalar(value, name: str) -> float:
    value = check_finite_scalar(value, name)
    if value <= 0:
        raise ValidationError(f"{name} must be > 0, got {value!r}")
    return value


def check_count(value, name: str, minimum: int = 1) -> int:
    if not float(value).is_integer():
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_vector(values, name: str, min_length: int = 1) -> np.ndarray:
    """Coerce to a 1-d float array of finite values."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValidationError(f"{name} needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValidationError(f"{name} contains a non-finite value at position {bad}")
    return arr


def check_positive_vector(values, name: str, min_length: int = 1) -> np.ndarray:
    arr = check_vector(values, name, min_length)
    if np.any(arr <= 0):
        bad = int(np.flatnonzero(arr <= 0)[0])
        raise ValidationError(
            f"{name} must be strictly positive; value {arr[bad]!r} at position {bad} is not"
        )
    return arr


def check_count_vector(values, name: str, min_length: int = 1) -> np.ndarray:
    """Nonnegative integer-valued observations (returned as floats)."""
    arr = check_vector(values, name, min_length)
    bad = np.flatnonzero((arr < 0) | (arr != np.floor(arr)))
    if bad.size:
        i = int(bad[0])
        raise ValidationError(
            f"{name} must contain nonnegative integers; value {arr[i]!r} at position {i} is not"
        )
    return arr


def check_group_labels(y, name: str = "y") -> tuple[np.ndarray, tuple]:
    """Validate two-group labels; returns (indicator of second group, sorted labels)."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    labels = sorted(set(arr.tolist()))
    if len(labels) != 2:
        raise ValidationError(f"{name} must contain exactly two group labels, got {labels!r}")
    return arr == labels[1], tuple(labels)
