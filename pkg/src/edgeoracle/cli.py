"""Command line entry point: ``edgeoracle estimate`` and ``edgeoracle sweep``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import ConfigError, EdgeOracleError
from .harness import (
    ALGORITHMS,
    FORMATS,
    PRESETS,
    ExperimentConfig,
    result_to_json,
    rows_to_csv,
    run_experiment,
    scaling_sweep,
    write_output,
)

SEED_ENV = "EDGEORACLE_SEED"


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgeoracle", description="Edge estimation with BIS/IS oracles.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("estimate", "sweep"):
        p = sub.add_parser(name, help="run seeded trials" if name == "estimate" else "run trials over a size ladder")
        p.add_argument("--config", help="JSON file whose keys mirror the flags; flags given on the command line win")
        p.add_argument("--graph", help="edge-list file or gen:family:key=value,...")
        p.add_argument("--algo", choices=ALGORITHMS)
        p.add_argument("--eps", type=float)
        p.add_argument("--preset", choices=PRESETS)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, dest="base_seed", help=f"base seed (default: ${SEED_ENV} or 0)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--vertex", type=int, help="vertex for bis-degree")
        p.add_argument("--workers", type=int, help="trial worker processes")
        p.add_argument("--timing", action="store_const", const=True, help="record wall-clock time per trial")
        p.add_argument("--trace", help="write the query trace of trial 0 to this file")
        if name == "sweep":
            p.add_argument("--sizes", type=_sizes, required=False, help="comma-separated vertex counts")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        if "seed" in data:
            data["base_seed"] = data.pop("seed")
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        data[key] = value
    if "base_seed" not in data:
        env = os.environ.get(SEED_ENV)
        try:
            data["base_seed"] = int(env) if env else 0
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return ExperimentConfig.from_mapping(data)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "estimate":
            result = run_experiment(config)
            if config.format == "csv":
                text = rows_to_csv(result.rows)
            else:
                text = result_to_json(config, result.rows, result.summary)
        else:
            sweep = scaling_sweep(config)
            if config.format == "csv":
                text = rows_to_csv(sweep.rows)
            else:
                extra = {"table": sweep.table, "slope_vs_n": sweep.slope_vs_n, "slope_vs_m": sweep.slope_vs_m}
                text = result_to_json(config, sweep.rows, None, extra)
        write_output(text, config.out)
    except EdgeOracleError as exc:
        print(f"edgeoracle: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
