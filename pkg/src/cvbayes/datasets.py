"""Bundled and locally-supplied datasets for the worked examples.

The anthropometric summary table ships with the package (the published
analysis is fully reproducible from the summaries because the Normal model
is conjugate in them).  The other examples need raw observations that are
not redistributable here; they are read from a local data directory
(argument, or the CVBAYES_DATA_DIR environment variable) and a missing file
raises :class:`~cvbayes.exceptions.MissingDataError` naming the public
source to key in.
"""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

from .exceptions import MissingDataError
from .samples import Sample, load_values_csv

ENV_DATA_DIR = "CVBAYES_DATA_DIR"


def bundled_path(name: str) -> Path:
    return Path(resources.files("cvbayes").joinpath("data", name))


def load_anthropometric_table() -> list[dict]:
    """Rows of the bundled anthropometric summary table.

    Each row: measurement name plus a summary-only Sample per group
    (men, women).
    """
    rows = []
    with open(bundled_path("anthropometric_summary.csv"), newline="") as fh:
        reader = csv.DictReader(ln for ln in fh if not ln.startswith("#"))
        for rec in reader:
            rows.append(
                {
                    "measurement": rec["measurement"],
                    "men": Sample.from_summary(
                        rec["men_n"], rec["men_mean"], rec["men_sd"]
                    ),
                    "women": Sample.from_summary(
                        rec["women_n"], rec["women_mean"], rec["women_sd"]
                    ),
                }
            )
    return rows


def resolve_data_dir(data_dir=None) -> Path | None:
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(ENV_DATA_DIR)
    return Path(env) if env else None


def load_local_sample(data_dir, filename: str, source: str) -> Sample:
    """Raw-value CSV from the local data directory; explicit error if absent."""
    directory = resolve_data_dir(data_dir)
    if directory is None or not (directory / filename).is_file():
        where = directory / filename if directory else filename
        raise MissingDataError(
            f"dataset file {where} is not available; supply it locally "
            f"(one-column CSV with header 'value'). Source: {source}"
        )
    return load_values_csv(directory / filename)
