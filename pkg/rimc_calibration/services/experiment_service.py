"""Single experiment runs: teacher training, deployment, calibration, evaluation"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path

from rimc_calibration.calibration import (
    CalibConfig,
    CalibrationReport,
    backprop_baseline,
    calibrate_network,
    extract_teacher_features,
)
from rimc_calibration.linalg import RngStream
from rimc_calibration.nn import (
    Dataset,
    Network,
    build_preset,
    deploy_to_rimc,
    evaluate,
    load_model,
    make_blobs,
    read_csv_dataset,
    read_idx_dataset,
    sample_calibration_set,
    save_model,
    split_dataset,
    train_teacher,
)
from rimc_calibration.rram import DriftSpec
from rimc_calibration.services.config_loader import DatasetSpec, ExperimentConfig

TEACHER_FILE = "teacher.rimc"
STUDENT_FILE = "student.rimc"

# stream indices below a cell seed
DEPLOY_STREAM = 0
CALIB_SET_STREAM = 1
BACKPROP_STREAM = 2


@dataclass(frozen=True)
class CellKey:
    """Identity of one run: (method, rank, rho, n_samples, seed)"""

    method: str
    rank: int
    rho: float
    n_samples: int
    seed: int

    def as_tuple(self) -> tuple:
        return (self.method, self.rank, self.rho, self.n_samples, self.seed)


@dataclass
class CellResult:
    """Report and accuracies of one completed run"""

    key: CellKey
    report: CalibrationReport
    network: Network

    def to_row(self) -> dict:
        return {
            "method": self.key.method,
            "rank": self.key.rank,
            "rho": self.key.rho,
            "n_samples": self.key.n_samples,
            "seed": self.key.seed,
            "acc_teacher": self.report.acc_teacher,
            "acc_drifted": self.report.acc_drifted,
            "acc_calibrated": self.report.acc_calibrated,
            "gamma_total": self.report.gamma_total,
            "rram_writes": self.report.rram_writes,
            "sram_updates": self.report.sram_updates,
            "wall_ms": self.report.wall_ms,
        }


def load_splits(spec: DatasetSpec) -> tuple[Dataset, Dataset]:
    """Build or read the dataset and split it into (train, test)

    Raises:
        DatasetError: If the data is malformed
        OSError: If a dataset file cannot be read
    """
    if spec.kind == "idx":
        dataset = read_idx_dataset(spec.images, spec.labels, spec.classes)  # type: ignore[arg-type]
    elif spec.kind == "csv":
        dataset = read_csv_dataset(spec.path, spec.classes, spec.image_shape)  # type: ignore[arg-type]
    else:
        dataset = make_blobs(
            spec.classes, spec.dims, spec.n, spec.seed, spec.separation, spec.image_shape, spec.offset
        )
    return split_dataset(dataset, spec.test_fraction, spec.seed)


# noinspection PyMethodMayBeStatic
class ExperimentService:
    """Runs the stages of one experiment described by an ``ExperimentConfig``"""

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config
        self._splits: tuple[Dataset, Dataset] | None = None

    @property
    def out_dir(self) -> Path:
        return Path(self.config.out_dir)

    def splits(self) -> tuple[Dataset, Dataset]:
        if self._splits is None:
            self._splits = load_splits(self.config.dataset)
        return self._splits

    def train_teacher(self, save: bool = True) -> tuple[Network, float]:
        """Build the configured preset, train it and report its test accuracy

        Returns:
            tuple[Network, float]: trained teacher and test accuracy
        """
        train, test = self.splits()
        try:
            net = build_preset(
                self.config.preset,
                train.inputs.shape[1:],
                train.num_classes,
                RngStream(self.config.seed).child(0),
            )
            teacher = train_teacher(net, train, replace(self.config.teacher, seed=self.config.seed))
        except Exception as e:
            logging.error(f"ExperimentService.train_teacher: {type(e).__name__}: {e}", exc_info=True)
            raise
        accuracy = evaluate(teacher, test)
        teacher.metadata["test_accuracy"] = accuracy
        logging.info(f"ExperimentService.train_teacher: {self.config.preset} test accuracy {accuracy:.4f}")
        if save:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            save_model(teacher, self.out_dir / TEACHER_FILE)
        return teacher, accuracy

    def load_teacher(self) -> Network:
        """The configured ``model_file``, else the teacher saved in the output directory"""
        path = Path(self.config.model_file) if self.config.model_file else self.out_dir / TEACHER_FILE
        return load_model(path)

    def deploy(self, teacher: Network, rho: float, seed: int) -> Network:
        """Program and drift the teacher with the configured device settings"""
        drift = self.config.drift
        return deploy_to_rimc(
            teacher,
            DriftSpec(rho=rho, mu_rel=drift.mu_rel, seed=seed, accumulate=drift.accumulate),
            drift.program_spec,
            drift.g_max,
            RngStream(seed).child(DEPLOY_STREAM),
        )

    def calibrate(
        self, teacher: Network, student: Network, method: str, cfg: CalibConfig
    ) -> tuple[Network, CalibrationReport]:
        """Run one calibration method on a deployed student and fill in the accuracies"""
        train, test = self.splits()
        calib_set = sample_calibration_set(
            train, cfg.n_calib_samples, RngStream(cfg.seed).child(CALIB_SET_STREAM)
        )
        try:
            if method == "backprop":
                calibrated, report = backprop_baseline(
                    student,
                    calib_set,
                    cfg,
                    self.config.drift.program_spec,
                    RngStream(cfg.seed).child(BACKPROP_STREAM),
                )
            else:
                cache = extract_teacher_features(teacher, calib_set.inputs)
                calibrated, report = calibrate_network(student, cache, replace(cfg, adapter_kind=method))
        except Exception as e:
            logging.error(f"ExperimentService.calibrate: {type(e).__name__}: {e}", exc_info=True)
            raise

        report.acc_teacher = evaluate(teacher, test)
        report.acc_drifted = evaluate(student, test)
        report.acc_calibrated = evaluate(calibrated, test)
        logging.info(
            f"ExperimentService.calibrate: {method} accuracy teacher {report.acc_teacher:.4f} "
            f"drifted {report.acc_drifted:.4f} calibrated {report.acc_calibrated:.4f}"
        )
        return calibrated, report

    def run_cell(self, teacher: Network, key: CellKey) -> CellResult:
        """Deploy at (rho, seed) and calibrate with (method, rank, n_samples)"""
        cfg = self.config.calibration.for_cell(key.method, max(key.rank, 1), key.n_samples, key.seed)
        student = self.deploy(teacher, key.rho, key.seed)
        calibrated, report = self.calibrate(teacher, student, key.method, cfg)
        return CellResult(key=key, report=report, network=calibrated)

    def evaluate_file(self, path: str | Path) -> float:
        """Test accuracy of any persisted model"""
        _, test = self.splits()
        return evaluate(load_model(path), test)
