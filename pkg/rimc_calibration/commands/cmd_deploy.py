"""deploy: program a teacher onto drifting crossbars"""

import argparse

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.nn import evaluate, load_model, save_model
from rimc_calibration.services import ExperimentService
from rimc_calibration.services.experiment_service import STUDENT_FILE


def deploy(args: argparse.Namespace) -> int:
    """Deploy at the first configured drift level and seed, save the student

    Args:
        args (argparse.Namespace): parsed flags

    Returns:
        int: exit code
    """
    config = experiment_config(args)
    service = ExperimentService(config)
    teacher = load_model(args.model) if args.model else service.load_teacher()
    student = service.deploy(teacher, config.drift.rho[0], config.drift.seeds[0])

    service.out_dir.mkdir(parents=True, exist_ok=True)
    path = service.out_dir / STUDENT_FILE
    save_model(student, path)
    _, test = service.splits()
    print(f"student: {path}")
    print(f"drifted accuracy: {evaluate(student, test):.4f} (rho={config.drift.rho[0]})")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("deploy", help="program and drift a trained teacher")
    add_common_flags(parser)
    parser.add_argument("--model", metavar="PATH", help="teacher model file")
    parser.set_defaults(handler=deploy)
