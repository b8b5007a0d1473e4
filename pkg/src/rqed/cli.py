"""Command-line entry point.

Usage: rqed <experiment> --config PATH --out DIR [--threads N]
             [--seed-tolerance X]

The subcommand names the experiment to run; if the config file also
carries an `experiment` key the two must agree.  Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import VALID_EXPERIMENTS, load_config
from .errors import ConfigError, NumericalError
from .experiments import run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rqed",
        description="Cavity/circuit QED model construction and verification runs.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in VALID_EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", required=True, help="output directory for CSV files")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default 1; env RQED_THREADS overrides)")
        p.add_argument("--seed-tolerance", type=float, default=None,
                       help="self-consistency tolerance override, units of w_c")
    return parser


def _resolve_threads(cli_value: int | None) -> int:
    env = os.environ.get("RQED_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"RQED_THREADS={env!r} is not an integer") from None
    if cli_value is not None:
        return max(1, cli_value)
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        threads = _resolve_threads(args.threads)
        cfg = load_config(args.config)
        if cfg.has("experiment") and cfg.experiment != args.experiment:
            raise ConfigError(
                f"config names experiment {cfg.experiment!r} but the "
                f"subcommand is {args.experiment!r}"
            )
        cfg.values.setdefault("experiment", args.experiment)
        if args.seed_tolerance is not None:
            cfg.values["resolvent.tol"] = repr(args.seed_tolerance)
        paths = run_experiment(cfg, args.out, threads=threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
