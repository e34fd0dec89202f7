"""Command-line front end.

    scauction run    --out DIR [--config FILE] [--trials N] [--seed N] [--pricing P]
    scauction sweep  --out DIR [--config FILE] [--trials N] [--seed N] [--pricing P]
    scauction detect --in DIR [--threshold F]

Exit codes: 0 on success, 2 for configuration or input-format problems,
3 for filesystem errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .aftermarket import detect_from_averages
from .config import ConfigError, ScenarioConfig, default_config
from .harness import export, power_sweep, run_trials


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scauction",
        description="Auction-based subcarrier allocation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON scenario file (defaults built in)")
        p.add_argument("--out", required=True, help="output directory for exports")
        p.add_argument("--trials", type=int, help="override the number of auction epochs")
        p.add_argument("--seed", type=int, help="override the base RNG seed")
        p.add_argument(
            "--pricing", choices=["first", "second"], help="override the pricing policy"
        )

    run_p = sub.add_parser("run", help="run the auction experiment and export CSVs")
    add_common(run_p)

    sweep_p = sub.add_parser(
        "sweep", help="run the experiment across the transmit power grid"
    )
    add_common(sweep_p)

    det_p = sub.add_parser(
        "detect", help="flag interference from an exported deal_price.csv"
    )
    det_p.add_argument("--in", dest="in_dir", required=True, help="export directory to read")
    det_p.add_argument(
        "--threshold",
        type=float,
        default=0.5,
        help="flag below this fraction of the median average price (default 0.5)",
    )
    return parser


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        config = ScenarioConfig.from_json(args.config)
    else:
        config = default_config()
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.pricing is not None:
        overrides["pricing_policy"] = args.pricing
    if overrides:
        config = replace(config, **overrides)
    return config


def _contiguous_ranges(indices: np.ndarray) -> list[list[int]]:
    ranges: list[list[int]] = []
    for sc in indices.tolist():
        if ranges and sc == ranges[-1][1] + 1:
            ranges[-1][1] = sc
        else:
            ranges.append([sc, sc])
    return ranges


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = run_trials(config)
    export(args.out, run=result)
    summary = result.summary()
    print(json.dumps({"out": os.path.abspath(args.out), "summary": summary}, sort_keys=True))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = run_trials(config)
    sweep = power_sweep(config)
    export(args.out, run=result, sweep=sweep)
    print(
        json.dumps(
            {
                "out": os.path.abspath(args.out),
                "power_gap_db": None if np.isnan(sweep.gap_db) else sweep.gap_db,
                "points": len(sweep.points),
            },
            sort_keys=True,
        )
    )
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    if not 0 < args.threshold < 1:
        raise ConfigError("threshold must be between 0 and 1 exclusive")
    path = os.path.join(args.in_dir, "deal_price.csv")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "mean_deal_price" not in reader.fieldnames:
            raise ConfigError(f"{path} is missing the mean_deal_price column")
        try:
            averages = np.array([float(row["mean_deal_price"]) for row in reader])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path} holds a non-numeric mean_deal_price") from exc
    if averages.size == 0:
        raise ConfigError(f"{path} has no data rows")
    flagged = detect_from_averages(averages, args.threshold)
    positive = averages[averages > 0]
    report = {
        "flagged": [int(s) for s in flagged],
        "ranges": _contiguous_ranges(flagged),
        "num_flagged": int(flagged.size),
        "num_sc": int(averages.size),
        "median_average_price": float(np.median(averages)) if positive.size else 0.0,
        "threshold_fraction": args.threshold,
    }
    print(json.dumps(report, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "detect":
            return _cmd_detect(args)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
