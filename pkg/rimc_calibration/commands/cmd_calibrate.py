"""calibrate: run the configured methods on one deployed student"""

import argparse

from rimc_calibration.commands.common import add_common_flags, experiment_config
from rimc_calibration.nn import load_model, save_model
from rimc_calibration.services import CellKey, CellResult, ExperimentService
from rimc_calibration.services.experiment_service import STUDENT_FILE
from rimc_calibration.services.result_files import results_filename, write_results


def calibrate(args: argparse.Namespace) -> int:
    """Calibrate with every configured method; one row per method in one results file

    The first configured rank and calibration-set size are used; drift level and seed
    come from the student's deployment record.

    Args:
        args (argparse.Namespace): parsed flags

    Returns:
        int: exit code
    """
    config = experiment_config(args)
    service = ExperimentService(config)
    teacher = load_model(args.teacher) if args.teacher else service.load_teacher()
    student = load_model(args.student or service.out_dir / STUDENT_FILE)
    rho = float(student.metadata.get("rho", config.drift.rho[0]))
    seed = int(student.metadata.get("drift_seed", config.drift.seeds[0]))
    sweep = config.calibration

    rows = []
    for method in sweep.methods:
        rank = 0 if method == "backprop" else sweep.ranks[0]
        key = CellKey(method, rank, rho, sweep.n_samples[0], seed)
        cfg = sweep.for_cell(method, max(rank, 1), key.n_samples, seed)
        calibrated, report = service.calibrate(teacher, student, method, cfg)

        out = service.out_dir
        out.mkdir(parents=True, exist_ok=True)
        save_model(calibrated, out / f"calibrated_{method}.rimc")
        (out / f"report_{method}.json").write_text(report.to_json() + "\n", encoding="utf-8")
        rows.append(CellResult(key=key, report=report, network=calibrated).to_row())
        print(
            f"{method}: accuracy {report.acc_drifted:.4f} -> {report.acc_calibrated:.4f}, "
            f"rram_writes={report.rram_writes}, gamma={report.gamma_total:.4f}"
        )

    path = write_results(rows, service.out_dir / results_filename(config.format), config.format)
    print(f"results: {path}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("calibrate", help="calibrate a deployed student")
    add_common_flags(parser)
    parser.add_argument("--student", metavar="PATH", help="student model file")
    parser.add_argument("--teacher", metavar="PATH", help="teacher model file")
    parser.set_defaults(handler=calibrate)
