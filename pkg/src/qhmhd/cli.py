"""Command-line entry point.

    mhd simulate|equivalence|sweep|counterexamples|iterate|probes
        --config <path> [--out <dir>] [--seed <u64>] [--plots]

The config is a YAML key-value document (schema in the README).  The
subcommand overrides the config's `scenario` field; --out, --seed and
--plots override the corresponding config entries.  MHD_THREADS caps
worker parallelism for independent sweep points.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .scenarios import SCENARIOS, ConfigError, ExperimentConfig, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mhd",
        description="2-D pseudo-spectral quasi-homogeneous ideal MHD scenarios",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", type=Path, default=None,
                       help="YAML config file (defaults apply if omitted)")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
        p.add_argument("--plots", action="store_true", help="emit SVG plots")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = ExperimentConfig.from_file(args.config)
        else:
            cfg = ExperimentConfig()
        cfg = dataclasses.replace(cfg, scenario=args.scenario)
        if args.out is not None:
            cfg = dataclasses.replace(cfg, out_dir=args.out)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        if args.plots:
            cfg = dataclasses.replace(cfg, plots=True)
        summary = run_scenario(cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    json.dump(summary, sys.stdout, indent=2, sort_keys=True, default=str)
    print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
