"""eval: accuracy of a persisted model on the configured test split"""

import argparse

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.services import ExperimentService


def evaluate_model(args: argparse.Namespace) -> int:
    """Print top-1 test accuracy of ``--model``"""
    accuracy = ExperimentService(experiment_config(args)).evaluate_file(args.model)
    print(f"{args.model}: accuracy {accuracy:.4f}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate a model file")
    add_common_flags(parser)
    parser.add_argument("--model", metavar="PATH", required=True, help="model file")
    parser.set_defaults(handler=evaluate_model)
