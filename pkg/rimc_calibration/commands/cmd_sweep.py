"""sweep: every configured cell, resumable"""

import argparse

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.services import SweepService


def sweep(args: argparse.Namespace) -> int:
    """Run the Cartesian sweep and export results, summary and metadata

    Args:
        args (argparse.Namespace): parsed flags

    Returns:
        int: exit code
    """
    outcome = SweepService(experiment_config(args)).run(resume=not args.fresh)
    print(f"results: {outcome.results_path}")
    print(f"summary: {outcome.summary_path}")
    print(f"cells run: {outcome.completed}, resumed: {outcome.skipped}, failed: {len(outcome.failures)}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="run a parameter sweep")
    add_common_flags(parser)
    parser.add_argument("--fresh", action="store_true", help="discard rows from earlier runs")
    parser.set_defaults(handler=sweep)
