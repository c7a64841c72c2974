"""squid-lindblad command line: sweep, plot, verify, validate.

Exit codes: 0 success, 1 failed sweep points or oracles, 2 configuration
errors, 3 results unusable for the requested figure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import pandas as pd

from squid_lindblad import __version__
from squid_lindblad.AsyncSweepRunner import AsyncSweepRunner
from squid_lindblad.config import RunConfig, load_config
from squid_lindblad.errors import ConfigError, MissingColumnsError, SquidLindbladError
from squid_lindblad.logs import setup_logging
from squid_lindblad.observables import (
    SweepRecord,
    first_order_generator,
    impurity_amplification,
)
from squid_lindblad.oracles import FAULTS, ORACLES, run_oracles
from squid_lindblad.params import ValidationReport, validate_params
from squid_lindblad.plotting import FIGURES, plot_figure
from squid_lindblad.results import (
    ResultBundle,
    ResultCache,
    read_results,
    write_csv,
    write_json,
)
from squid_lindblad.util import deep_get

log = logging.getLogger("squid_lindblad.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESULTS = 3


def validate_config(config: RunConfig) -> ValidationReport:
    """Parameter validation at every damping rate and cutoff of the run."""
    report = ValidationReport()
    seen = set()
    omega0 = config.scales.omega0
    for gamma in config.gamma_ratios:
        for cutoff in config.cutoff_ratios:
            bath = replace(
                config.bath,
                damping_rate=gamma * omega0,
                cutoff_frequency=cutoff * omega0,
            )
            for issue in validate_params(config.squid, bath, config.sim):
                if (issue.key, issue.message) not in seen:
                    seen.add((issue.key, issue.message))
                    report.issues.append(issue)
    return report


def log_amplification(records: list[SweepRecord]) -> None:
    frame = pd.DataFrame([r.as_dict() for r in records])
    if frame.empty:
        return
    for row in impurity_amplification(frame).itertuples(index=False):
        log.info(
            "gamma %.3g, xi %.3g: impurity ratio %.3f at flux %.4f",
            row.gamma_ratio,
            row.xi,
            row.ratio,
            row.flux_fraction,
        )


def _report_issues(report: ValidationReport) -> None:
    for issue in report.warnings:
        log.warning("%s: %s", issue.key, issue.message)
    for issue in report.errors:
        log.error("%s: %s", issue.key, issue.message)


def _load(path: str) -> RunConfig | None:
    try:
        return load_config(path)
    except ConfigError as exc:
        log.error("%s: %s", path, exc)
        return None


def cmd_validate(args) -> int:
    config = _load(args.config)
    if config is None:
        return EXIT_CONFIG
    report = validate_config(config)
    _report_issues(report)
    if not report.valid:
        return EXIT_CONFIG
    log.info("%s is valid", args.config)
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args.config)
    if config is None:
        return EXIT_CONFIG
    report = validate_config(config)
    _report_issues(report)
    if not report.valid:
        return EXIT_CONFIG

    stem = Path(args.config).with_suffix("")
    csv_path = Path(args.output_csv or config.output_csv or f"{stem}.csv")
    json_path = Path(args.output_json or config.output_json or f"{stem}.json")

    if args.dump_spectrum:
        scales = config.scales_at(config.cutoff_ratios[0], config.gamma_ratios[0])
        G = first_order_generator(scales, float(config.flux_grid[0]), config.sim)
        G.dump_spectrum(args.dump_spectrum)

    cache = None
    if config.use_cache and config.cache_dir is not None and not args.no_cache:
        cache = ResultCache(config.cache_dir)

    bundle = cache.load(config) if cache is not None else None
    if bundle is None:
        runner = AsyncSweepRunner(config, log=log, workers=args.workers)
        records = asyncio.run(runner.run())
        bundle = ResultBundle.from_run(config, records)
        if cache is not None:
            cache.store(bundle)

    write_csv(bundle.records, csv_path)
    write_json(bundle, json_path)
    log_amplification(bundle.records)

    failed = [r for r in bundle.records if r.error is not None]
    for record in failed:
        log.error(
            "flux %.6g, xi %.4g: %s", record.flux_fraction, record.xi, record.error
        )
    return EXIT_FAILED if failed else EXIT_OK


def cmd_plot(args) -> int:
    path = Path(args.results)
    try:
        frame = read_results(path)
    except (OSError, ValueError, KeyError) as exc:
        log.error("cannot read %s: %s", path, exc)
        return EXIT_RESULTS

    if path.suffix.lower() == ".json":
        bundle = json.loads(path.read_text(encoding="utf-8"))
        log.info(
            "results from version %s, N = %s",
            deep_get(bundle, ["provenance", "version"]),
            deep_get(bundle, ["provenance", "N"]),
        )

    output = Path(args.output or path.with_name(f"{path.stem}_{args.figure}.svg"))
    try:
        plot_figure(frame, args.figure, output)
    except MissingColumnsError as exc:
        log.error("%s", exc)
        return EXIT_RESULTS
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for name in ORACLES:
            print(name)
        return EXIT_OK

    results = run_oracles(args.only, fault=args.inject_fault)
    table = pd.DataFrame([r.as_row() for r in results])
    with pd.option_context("display.max_colwidth", 120, "display.width", 200):
        print(table.to_string(index=False, float_format=lambda v: f"{v:.3e}"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squid-lindblad",
        description="Steady states of a SQUID ring coupled to an Ohmic bath.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug output")
    parser.add_argument("--log-file", help="write a debug log to this file")
    parser.add_argument(
        "--trace", action="store_true", help="keep solver trace records in the log"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a flux sweep")
    sweep.add_argument("config", help="key = value configuration file")
    sweep.add_argument(
        "-j", "--workers", type=int, help="worker threads (1 runs sequentially)"
    )
    sweep.add_argument("--output-csv", help="CSV path (overrides the config)")
    sweep.add_argument("--output-json", help="JSON path (overrides the config)")
    sweep.add_argument("--no-cache", action="store_true", help="ignore the cache")
    sweep.add_argument(
        "--dump-spectrum",
        metavar="PATH",
        help="write the first order Liouvillian spectrum at the first grid point",
    )
    sweep.set_defaults(func=cmd_sweep)

    plot = sub.add_parser("plot", help="draw a figure from sweep results")
    plot.add_argument("results", help="CSV or JSON written by sweep")
    plot.add_argument("--figure", choices=sorted(FIGURES), default="fig1")
    plot.add_argument("-o", "--output", help="SVG path")
    plot.set_defaults(func=cmd_plot)

    verify = sub.add_parser("verify", help="run the numerical oracles")
    verify.add_argument("--list", action="store_true", help="list oracle names")
    verify.add_argument("--only", nargs="+", choices=sorted(ORACLES), metavar="NAME")
    verify.add_argument(
        "--inject-fault", choices=FAULTS, help="break a generator on purpose"
    )
    verify.set_defaults(func=cmd_verify)

    validate = sub.add_parser("validate", help="check a configuration file")
    validate.add_argument("config")
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(verbose=args.verbose, log_file=args.log_file, trace=args.trace)
    try:
        return args.func(args)
    except SquidLindbladError as exc:
        log.error("%s", exc)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
