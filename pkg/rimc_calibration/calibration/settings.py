"""Calibration settings"""

from dataclasses import asdict, dataclass

from rimc_calibration.config import (
    ADAM_BETAS,
    ADAM_EPS,
    ADAPTER_KINDS,
    CALIB_EPOCHS,
    CALIB_LOSS_THRESHOLD,
    CALIB_LR,
    CALIB_RANK,
    CALIB_SAMPLES,
    DORA_MODES,
    OPTIMIZERS,
)
from rimc_calibration.exceptions import ParameterError


@dataclass(frozen=True)
class CalibConfig:
    """Settings for feature-based calibration and the backprop baseline

    ``batch`` counts calibration samples per optimizer step; every epoch visits all
    samples once. ``epochs = 0`` is accepted as a no-op run.
    """

    epochs: int = CALIB_EPOCHS
    loss_threshold: float = CALIB_LOSS_THRESHOLD
    lr: float = CALIB_LR
    optimizer: str = "adam"
    beta1: float = ADAM_BETAS[0]
    beta2: float = ADAM_BETAS[1]
    eps: float = ADAM_EPS
    momentum: float = 0.0
    batch: int = 1
    n_calib_samples: int = CALIB_SAMPLES
    rank: int = CALIB_RANK
    adapter_kind: str = "dora"
    mode: str = "weight_norm"
    seed: int = 0
    workers: int = 1
    merge: bool = False
    quantize: bool = False

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ParameterError(f"CalibConfig: epochs must be >= 0, got {self.epochs}")
        if self.lr <= 0:
            raise ParameterError(f"CalibConfig: lr must be > 0, got {self.lr}")
        if self.n_calib_samples < 1:
            raise ParameterError(f"CalibConfig: n_calib_samples must be >= 1, got {self.n_calib_samples}")
        if self.batch < 1:
            raise ParameterError(f"CalibConfig: batch must be >= 1, got {self.batch}")
        if self.rank < 1:
            raise ParameterError(f"CalibConfig: rank must be >= 1, got {self.rank}")
        if self.optimizer not in OPTIMIZERS:
            raise ParameterError(f"CalibConfig: unknown optimizer '{self.optimizer}'")
        if self.adapter_kind not in ADAPTER_KINDS:
            raise ParameterError(f"CalibConfig: unknown adapter kind '{self.adapter_kind}'")
        if self.mode not in DORA_MODES:
            raise ParameterError(f"CalibConfig: unknown mode '{self.mode}'")
        if self.workers < 1:
            raise ParameterError(f"CalibConfig: workers must be >= 1, got {self.workers}")

    def to_dict(self) -> dict:
        return asdict(self)
