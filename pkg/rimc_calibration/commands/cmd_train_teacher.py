"""train-teacher: train the configured preset digitally and save it"""

import argparse
from dataclasses import replace

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.config import PRESETS
from rimc_calibration.services import ExperimentService
from rimc_calibration.services.experiment_service import TEACHER_FILE


def train_teacher(args: argparse.Namespace) -> int:
    """Train, evaluate and persist the teacher

    Args:
        args (argparse.Namespace): parsed flags

    Returns:
        int: exit code
    """
    config = experiment_config(args)
    if args.preset:
        config = replace(config, preset=args.preset)
    service = ExperimentService(config)
    _, accuracy = service.train_teacher(save=True)
    print(f"teacher: {service.out_dir / TEACHER_FILE}")
    print(f"test accuracy: {accuracy:.4f}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("train-teacher", help="train the teacher network")
    add_common_flags(parser)
    parser.add_argument("--preset", choices=PRESETS, help="network preset (overrides the file)")
    parser.set_defaults(handler=train_teacher)
