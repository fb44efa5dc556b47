"""Command-line interface.

Subcommands
-----------
compare    two data files -> discrepancy report (JSON or CSV)
simulate   run a TOML study grid -> per-cell CSV + JSON summary
reproduce  rerun a named published example -> per-row table
diagnose   recompute ESS/ACF/Geweke from an exported trace CSV

Exit codes: 0 success, 2 input error, 3 convergence failure (report still
written), 4 missing dataset.  Reports are byte-identical across runs for
equal seeds; timestamps are only included on request.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path


from .__about__ import __version__
from .compare import ComparisonReport, compare_samples
from .datasets import ENV_DATA_DIR
from .exceptions import CvBayesError, MissingDataError, ValidationError
from .mcmc.diagnostics import (
    GateThresholds,
    read_trace_csv,
    summarize_chain,
    write_acf_csv,
    write_trace_csv,
)
from .models import get_model
from .replication import EXAMPLE_NAMES, reproduce_example
from .samples import load_sample
from .simulation import load_grid, run_consistency_study, run_fncr_study

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_MISSING_DATA = 4


def _add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    parser.add_argument("--draws", type=int, default=None,
                        help="posterior CV draws per population")
    parser.add_argument("--iterations", type=int, default=None, help="MCMC iterations")
    parser.add_argument("--burn-in", type=int, default=None, help="MCMC burn-in")
    parser.add_argument("--thin", type=int, default=None, help="MCMC thinning factor")


def _load_run_config(path) -> dict:
    """Run-configuration TOML file for ``compare``; flags override its keys."""
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    allowed = {
        "model", "seed", "draws", "iterations", "burn_in", "thin",
        "output_format", "workers", "timestamp",
    }
    try:
        payload = tomllib.loads(Path(path).read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"{path}: TOML parse error: {exc}") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    extra = set(payload) - allowed
    if extra:
        raise ValidationError(f"{path}: unknown run-config keys {sorted(extra)}")
    return payload


def _resolve(args, key: str, file_config: dict, default=None):
    flag_value = getattr(args, key)
    if flag_value is not None and flag_value is not False:
        return flag_value
    return file_config.get(key, default)


def _sampler_overrides(args, file_config: dict | None = None) -> dict | None:
    file_config = file_config or {}
    overrides = {
        "n_iterations": _resolve(args, "iterations", file_config),
        "burn_in": _resolve(args, "burn_in", file_config),
        "thin": _resolve(args, "thin", file_config),
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return overrides or None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvbayes",
        description="Bayesian comparison of two populations' coefficients of variation",
    )
    parser.add_argument("--version", action="version", version=f"cvbayes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="discrepancy report for two data files")
    p.add_argument("data1", help="raw CSV (header 'value') or JSON summary (normal model)")
    p.add_argument("data2")
    p.add_argument("--model", default=None,
                   choices=["normal", "invgauss", "skewnormal", "negbin"])
    p.add_argument("--config", type=Path, default=None,
                   help="run-configuration TOML; explicit flags override it")
    _add_sampler_flags(p)
    p.add_argument("--output", type=Path, default=None, help="report path (default stdout)")
    p.add_argument("--output-format", choices=["json", "csv"], default=None)
    p.add_argument("--emit-traces", type=Path, default=None, metavar="DIR",
                   help="write per-population trace and ACF CSVs into DIR")
    p.add_argument("--timestamp", action="store_true",
                   help="include a timestamp field in the JSON report")
    p.add_argument("--workers", type=int, default=None,
                   help="sample the two populations in parallel when > 1")

    p = sub.add_parser("simulate", help="run a study grid from a TOML file")
    p.add_argument("grid", help="grid TOML path")
    p.add_argument("--output-dir", type=Path, default=Path("."),
                   help="directory for the CSV/JSON results")
    p.add_argument("--full-scale", action="store_true",
                   help="apply the grid's [full_scale] overrides")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="override the grid master seed")
    p.add_argument("--kind", choices=["fncr", "consistency"], default="fncr")

    p = sub.add_parser("reproduce", help="rerun a published example")
    p.add_argument("example", choices=list(EXAMPLE_NAMES))
    p.add_argument("--data-dir", type=Path, default=None,
                   help=f"local dataset directory (default ${ENV_DATA_DIR})")
    _add_sampler_flags(p)
    p.add_argument("--output", type=Path, default=None, help="CSV output path")

    p = sub.add_parser("diagnose", help="diagnostics from an exported trace CSV")
    p.add_argument("trace", help="CSV with columns iteration,<param>,...")
    p.add_argument("--output", type=Path, default=None,
                   help="plot-ready ACF CSV path (default <trace>.acf.csv)")
    return parser


def _report_to_row(name: str, report: ComparisonReport) -> dict:
    return {
        "row": name,
        "model": report.model,
        "discrepancy": f"{report.discrepancy:.4f}",
        "cv1": f"{report.populations[0].cv_estimate:.4f}",
        "cv2": f"{report.populations[1].cv_estimate:.4f}",
        "mc_se": f"{report.result.mc_se:.5f}",
        "converged": report.converged,
    }


def _write_report(report: ComparisonReport, args, output_format: str,
                  timestamp: bool) -> None:
    if output_format == "json":
        stamp = (
            datetime.now(timezone.utc).isoformat(timespec="seconds")
            if timestamp
            else None
        )
        text = json.dumps(report.to_dict(timestamp=stamp), indent=2) + "\n"
    else:
        payload = report.to_dict()
        flat = {
            "model": payload["model"],
            "discrepancy": payload["discrepancy"],
            "prob_below": payload["prob_below"],
            "prob_above": payload["prob_above"],
            "mc_se": payload["mc_se"],
            "external_side": payload["external_side"],
            "n_draws": payload["n_draws"],
            "converged": payload["converged"],
        }
        lines = [",".join(flat), ",".join(str(v) for v in flat.values())]
        text = "\n".join(lines) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)


def _cmd_compare(args) -> int:
    file_config = _load_run_config(args.config) if args.config else {}
    model = get_model(_resolve(args, "model", file_config, "normal"))
    sample1 = load_sample(args.data1)
    sample2 = load_sample(args.data2)
    report = compare_samples(
        sample1,
        sample2,
        model=model,
        n_draws=_resolve(args, "draws", file_config),
        seed=_resolve(args, "seed", file_config, 0),
        sampler_overrides=_sampler_overrides(args, file_config),
        gate_thresholds=GateThresholds(),
        keep_draws=args.emit_traces is not None,
        workers=_resolve(args, "workers", file_config, 1),
    )
    report.config_echo.update(
        {"model": report.model, "data1": str(args.data1), "data2": str(args.data2)}
    )
    if args.emit_traces is not None:
        args.emit_traces.mkdir(parents=True, exist_ok=True)
        for pop, draws in zip(report.populations, report.population_draws):
            base = args.emit_traces / f"population{pop.label}"
            write_trace_csv(f"{base}.trace.csv", draws.param_draws, draws.param_names)
            if pop.chain is not None:
                pop.chain.trace_path = f"{base}.trace.csv"
                write_acf_csv(f"{base}.acf.csv", pop.chain.acf, pop.chain.param_names)
    _write_report(
        report, args,
        output_format=_resolve(args, "output_format", file_config, "json"),
        timestamp=bool(_resolve(args, "timestamp", file_config, False)),
    )
    return EXIT_OK if report.converged else EXIT_CONVERGENCE


def _cmd_simulate(args) -> int:
    grid = load_grid(args.grid, full_scale=args.full_scale)
    if args.seed is not None:
        from dataclasses import replace

        grid = replace(grid, master_seed=args.seed)
    if args.kind == "fncr":
        result = run_fncr_study(grid, workers=args.workers)
    else:
        result = run_consistency_study(grid, workers=args.workers)
    args.output_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.grid).stem + ("_full" if args.full_scale else "")
    csv_path = args.output_dir / f"{stem}_{args.kind}.csv"
    json_path = args.output_dir / f"{stem}_{args.kind}.json"
    result.write_csv(csv_path)
    result.write_json(json_path)
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    rows = reproduce_example(
        args.example,
        data_dir=args.data_dir,
        seed=0 if args.seed is None else args.seed,
        n_draws=args.draws,
        sampler_overrides=_sampler_overrides(args),
    )
    table = [_report_to_row(name, report) for name, report in rows]
    widths = {k: max(len(k), *(len(str(r[k])) for r in table)) for k in table[0]}
    header = "  ".join(k.ljust(widths[k]) for k in table[0])
    print(header)
    print("-" * len(header))
    for r in table:
        print("  ".join(str(r[k]).ljust(widths[k]) for k in r))
    if args.output is not None:
        with open(args.output, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(table[0]))
            writer.writeheader()
            writer.writerows(table)
    all_converged = all(report.converged for _, report in rows)
    return EXIT_OK if all_converged else EXIT_CONVERGENCE


def _cmd_diagnose(args) -> int:
    names, data = read_trace_csv(args.trace)
    report = summarize_chain(data, kind="independent", acceptance_rate=1.0,
                             param_names=names)
    out = args.output or Path(str(args.trace) + ".acf.csv")
    write_acf_csv(out, report.acf, names)
    print(f"n_draws: {report.n_retained}")
    for j, name in enumerate(names):
        print(
            f"{name}: ess={report.ess[j]:.1f} geweke_z={report.geweke_z[j]:+.3f} "
            f"acf1={report.acf[j][1] if report.acf.shape[1] > 1 else float('nan'):+.4f}"
        )
    print(f"wrote {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "compare": _cmd_compare,
        "simulate": _cmd_simulate,
        "reproduce": _cmd_reproduce,
        "diagnose": _cmd_diagnose,
    }
    try:
        return handlers[args.command](args)
    except MissingDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_DATA
    except (ValidationError, CvBayesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
