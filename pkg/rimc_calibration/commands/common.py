"""Flags shared by every subcommand"""

import argparse

from rimc_calibration.config import RESULT_FORMATS
from rimc_calibration.services import ExperimentConfig, apply_overrides, load_config


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="YAML experiment file")
    parser.add_argument("--seed", type=int, help="master seed (overrides the file)")
    parser.add_argument("--out", metavar="DIR", help="output directory (overrides the file)")
    parser.add_argument("--workers", type=int, help="parallel workers (overrides the file)")
    parser.add_argument("--format", choices=RESULT_FORMATS, help="result file format")


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """File keys first, then command-line overrides"""
    return apply_overrides(
        load_config(args.config),
        seed=args.seed,
        out_dir=args.out,
        workers=args.workers,
        result_format=args.format,
    )
