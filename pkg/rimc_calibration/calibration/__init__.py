"""Feature-based calibration and the backprop baseline"""

from rimc_calibration.calibration.backprop import backprop_baseline
from rimc_calibration.calibration.engine import (
    LayerCalibration,
    calibrate_layer,
    calibrate_network,
    init_adapter,
)
from rimc_calibration.calibration.features import FeatureCache, LayerFeatures, extract_teacher_features
from rimc_calibration.calibration.gradients import AdapterGradients, adapter_gradients, mse_loss
from rimc_calibration.calibration.report import CalibrationReport, LayerReport
from rimc_calibration.calibration.settings import CalibConfig

__all__ = [
    "AdapterGradients",
    "CalibConfig",
    "CalibrationReport",
    "FeatureCache",
    "LayerCalibration",
    "LayerFeatures",
    "LayerReport",
    "adapter_gradients",
    "backprop_baseline",
    "calibrate_layer",
    "calibrate_network",
    "extract_teacher_features",
    "init_adapter",
    "mse_loss",
]
