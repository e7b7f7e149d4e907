"""Command-line entry point.

Subcommands map 1:1 to the bench runners: synth, unwrap, table1,
estimate, sweep. Settings resolve as defaults <- --config file <- flags.
Exit codes: 0 all scenarios completed, 1 configuration problem, 2
runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from .errors import ConfigError


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _add_common(sub):
    sub.add_argument("--config", metavar="PATH",
                     help="flat key = value config file")
    sub.add_argument("--seed", type=int, help="RNG seed recorded in outputs")
    sub.add_argument("--methods", metavar="LIST",
                     help="comma-separated unwrap methods (e.g. PU-M,PU-F)")
    sub.add_argument("--out", metavar="DIR", help="output directory")
    sub.add_argument("--reps", type=int,
                     help="timing repetitions (>= 3), warm-up excluded")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip PNG rendering, write only CSV/JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="seiscep",
        description="Spectral phase unwrapping and wavelet estimation benchmarks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("synth", parents=[], help="write a scenario trace "
                         "and its wrapped/ideal phase curves")
    _add_common(sp)

    up = subs.add_parser("unwrap", help="unwrap a trace file with the "
                         "requested methods")
    up.add_argument("trace", metavar="TRACE_CSV",
                    help="two-column CSV: time_s, amplitude")
    _add_common(up)

    tp = subs.add_parser("table1", help="accuracy and timing rows over the "
                         "sample-count list")
    _add_common(tp)

    ep = subs.add_parser("estimate", help="estimate the wavelet from a "
                         "synthetic gather")
    _add_common(ep)

    wp = subs.add_parser("sweep", help="fit accuracy over the "
                         "(sample count, SNR) grid")
    _add_common(wp)
    return parser


def _overrides(args) -> dict:
    methods = None
    if args.methods is not None:
        methods = tuple(
            m.strip() for m in args.methods.split(",") if m.strip()
        )
    return {
        "seed": args.seed,
        "methods": methods,
        "out_dir": args.out,
        "reps": args.reps,
        "figures": False if args.no_figures else None,
    }


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = bench.load_config(args.config, _overrides(args))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "synth":
            result = bench.run_synth(cfg)
        elif args.command == "unwrap":
            result = bench.run_unwrap(cfg, args.trace)
        elif args.command == "table1":
            result = bench.run_table1(cfg)
        elif args.command == "estimate":
            result = bench.run_estimate(cfg)
        else:
            result = bench.run_sweep(cfg)
        paths = list(result["paths"])
        if cfg.figures:
            from . import figures

            renderer = getattr(figures, f"figure_{args.command}")
            paths.extend(renderer(result, cfg))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
