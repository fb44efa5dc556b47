"""Worked-example reproductions: published datasets through the full pipeline.

``reproduce_example`` returns one comparison report per table row.  The
anthropometric example is self-contained (bundled summaries, conjugate
Normal model); the other three read locally supplied raw data:

* hodgkin  -- plasma bradykininogen levels of patients with active versus
  inactive Hodgkin's disease (17 and 28 patients; Chhikara & Folks 1989),
  inverse Gaussian model,
* mirna    -- expression of three differentially expressed miRNAs in tumor
  versus healthy colon tissue (GEO accession GSE18392), skew-Normal model,
* covid    -- offspring counts of COVID-19 cases traced in two Indian
  states (Laxminarayan et al. 2020) and in Hong Kong (Adam et al. 2020),
  Negative Binomial model.
"""

from __future__ import annotations

import numpy as np

from .compare import ComparisonReport, compare_samples
from .datasets import load_anthropometric_table, load_local_sample
from .exceptions import ValidationError

EXAMPLE_NAMES = ("anthropometric", "hodgkin", "mirna", "covid")

_LOCAL_EXAMPLES = {
    "hodgkin": {
        "model": "invgauss",
        "rows": [
            (
                "bradykininogen",
                ("hodgkin_active.csv", "hodgkin_inactive.csv"),
                "plasma bradykininogen (ug/ml), active vs inactive Hodgkin's "
                "disease, n=17/28 (Chhikara & Folks 1989)",
            )
        ],
    },
    "mirna": {
        "model": "skewnormal",
        "rows": [
            (
                gene,
                (f"mirna_{gene.lower().replace('-', '')}_tumor.csv",
                 f"mirna_{gene.lower().replace('-', '')}_healthy.csv"),
                f"{gene} expression, tumor vs healthy colon tissue "
                "(GEO accession GSE18392)",
            )
            for gene in ("miR-182", "miR-183", "miR-96")
        ],
    },
    "covid": {
        "model": "negbin",
        "rows": [
            (
                "offspring counts",
                ("covid_india.csv", "covid_hong_kong.csv"),
                "COVID-19 offspring counts: contact tracing in two Indian "
                "states (Laxminarayan et al. 2020) and in Hong Kong "
                "(Adam et al. 2020)",
            )
        ],
    },
}


def _row_seed(seed: int | None, index: int) -> int | None:
    if seed is None:
        return None
    return int(np.random.SeedSequence(seed, spawn_key=(900, index)).generate_state(1)[0])


def reproduce_example(
    name: str,
    data_dir=None,
    seed: int | None = 0,
    n_draws: int | None = None,
    sampler_overrides: dict | None = None,
) -> list[tuple[str, ComparisonReport]]:
    """Run one named example; returns (row name, report) pairs."""
    if name == "anthropometric":
        rows = []
        for index, rec in enumerate(load_anthropometric_table()):
            report = compare_samples(
                rec["men"],
                rec["women"],
                model="normal",
                n_draws=100_000 if n_draws is None else n_draws,
                seed=_row_seed(seed, index),
                labels=("men", "women"),
            )
            rows.append((rec["measurement"], report))
        return rows
    if name not in _LOCAL_EXAMPLES:
        raise ValidationError(
            f"unknown example {name!r}; choose from {EXAMPLE_NAMES}"
        )
    entry = _LOCAL_EXAMPLES[name]
    rows = []
    for index, (row_name, (file1, file2), source) in enumerate(entry["rows"]):
        sample1 = load_local_sample(data_dir, file1, source)
        sample2 = load_local_sample(data_dir, file2, source)
        report = compare_samples(
            sample1,
            sample2,
            model=entry["model"],
            n_draws=n_draws,
            seed=_row_seed(seed, index),
            sampler_overrides=sampler_overrides,
        )
        rows.append((row_name, report))
    return rows
