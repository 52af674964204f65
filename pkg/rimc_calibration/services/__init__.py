"""Experiment, sweep and cost services"""

from rimc_calibration.services.config_loader import (
    CalibrationSweep,
    CostOverrides,
    DatasetSpec,
    DriftSweep,
    ExperimentConfig,
    apply_overrides,
    load_config,
    parse_config,
)
from rimc_calibration.services.cost_service import CostService
from rimc_calibration.services.experiment_service import (
    CellKey,
    CellResult,
    ExperimentService,
    load_splits,
)
from rimc_calibration.services.result_service import ResultService
from rimc_calibration.services.sweep_service import SweepOutcome, SweepService, sweep_cells

__all__ = [
    "CalibrationSweep",
    "CellKey",
    "CellResult",
    "CostOverrides",
    "CostService",
    "DatasetSpec",
    "DriftSweep",
    "ExperimentConfig",
    "ExperimentService",
    "ResultService",
    "SweepOutcome",
    "SweepService",
    "apply_overrides",
    "load_config",
    "load_splits",
    "parse_config",
    "sweep_cells",
]
