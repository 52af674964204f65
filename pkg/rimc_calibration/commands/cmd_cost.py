"""cost: backprop vs adapter comparison table"""

import argparse
from pathlib import Path

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.services import CostService


def cost(args: argparse.Namespace) -> int:
    """Print the comparison as CSV and write cost.json / cost.csv

    Args:
        args (argparse.Namespace): parsed flags

    Returns:
        int: exit code
    """
    config = experiment_config(args)
    service = CostService(config)
    print(service.comparison().to_csv(), end="")
    service.write(Path(config.out_dir))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("cost", help="emit the cost comparison table")
    add_common_flags(parser)
    parser.set_defaults(handler=cost)
