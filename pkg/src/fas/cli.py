"""Command-line front end.

Subcommands:
  fas run      - execute a scenario from a config file or by name
  fas predict  - print the closed-form SER, diversity gain, and coding gain
  fas version  - print the toolkit version

Exit codes: 0 success, 1 usage/validation error, 2 I/O error,
3 numeric error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fas", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run an experiment scenario")
    run.add_argument("--config", help="path to a YAML scenario config")
    run.add_argument("--scenario", choices=("fig2", "fig3", "fig4"),
                     help="built-in scenario name (alternative to --config)")
    run.add_argument("--out", help="output directory (with --scenario)")
    run.add_argument("--trials", type=int, help="Monte Carlo trials per curve")
    run.add_argument("--seed", type=int, help="master RNG seed")
    run.add_argument("--workers", type=int, default=1, help="parallel workers")
    run.add_argument("--estimator", choices=("semi_analytic", "symbol_level"),
                     help="SER estimator")

    pred = sub.add_parser("predict", help="closed-form prediction for one config")
    pred.add_argument("--n", type=int, required=True, help="number of ports")
    pred.add_argument("--w", type=float, required=True, help="aperture width")
    pred.add_argument("--scheme", required=True,
                      choices=("bpsk", "psk", "pam", "qam"))
    pred.add_argument("--order", type=int, required=True, help="modulation order")
    pred.add_argument("--snr-db", type=float, required=True, action="append",
                      help="SNR point in dB (repeatable)")

    sub.add_parser("version", help="print the toolkit version")
    return parser


def _cmd_run(args, parser: _Parser) -> int:
    from .experiments import (
        DEFAULT_SEED,
        DEFAULT_TRIALS,
        build_scenario,
        parse_config,
        run_scenario,
    )

    try:
        if args.config:
            scenario = parse_config(args.config, workers=args.workers)
            if args.trials or args.seed is not None or args.estimator or args.out:
                from dataclasses import replace
                from pathlib import Path

                scenario = replace(
                    scenario,
                    trials=args.trials or scenario.trials,
                    seed=args.seed if args.seed is not None else scenario.seed,
                    estimator=args.estimator or scenario.estimator,
                    out_dir=Path(args.out) if args.out else scenario.out_dir,
                )
        elif args.scenario:
            if not args.out:
                parser.error("--out is required with --scenario")
            scenario = build_scenario(
                args.scenario,
                args.out,
                trials=args.trials or DEFAULT_TRIALS,
                seed=args.seed if args.seed is not None else DEFAULT_SEED,
                estimator=args.estimator or "semi_analytic",
                workers=args.workers,
            )
        else:
            parser.error("run requires --config or --scenario")
    except (ValueError, KeyError) as exc:
        print(f"fas run: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fas run: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        paths = run_scenario(scenario)
    except OSError as exc:
        print(f"fas run: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, FloatingPointError, RuntimeError) as exc:
        print(f"fas run: numeric failure: {exc}", file=sys.stderr)
        print(f"failing config: {scenario}", file=sys.stderr)
        return EXIT_NUMERIC

    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    from .asymptotics import asymptotic_ser, coding_gain, diversity_gain
    from .modulation import params_of
    from .spatial_channel import ApertureConfig, build_jakes_model

    try:
        spec = params_of(args.scheme, args.order)
        model = build_jakes_model(ApertureConfig(args.n, args.w))
    except ValueError as exc:
        print(f"fas predict: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        gd = diversity_gain(model)
        gc = coding_gain(spec, model)
        print(f"diversity_gain: {gd}")
        print(f"coding_gain: {gc:.12g}")
        for snr_db in args.snr_db:
            ser = asymptotic_ser(10.0 ** (snr_db / 10.0), spec, model)
            print(f"asymptotic_ser@{snr_db:g}dB: {ser:.12g}")
    except (ArithmeticError, RuntimeError) as exc:
        print(f"fas predict: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, parser)
    if args.command == "predict":
        return _cmd_predict(args)
    if args.command == "version":
        print(__version__)
        return EXIT_OK
    parser.print_help()
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
