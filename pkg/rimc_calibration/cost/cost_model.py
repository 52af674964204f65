"""Analytical endurance, lifespan, update-latency and speed model"""

import math
from dataclasses import dataclass
from fractions import Fraction

from rimc_calibration.config import (
    METHODS,
    RRAM_ENDURANCE,
    RRAM_WRITE_NS,
    SRAM_ENDURANCE,
    SRAM_RRAM_SPEED_RATIO,
)
from rimc_calibration.exceptions import ParameterError


@dataclass(frozen=True)
class CostModel:
    """Hardware constants plus the parameter counts of the calibrated model"""

    rram_endurance: int = RRAM_ENDURANCE
    sram_endurance: int = SRAM_ENDURANCE
    rram_write_ns: float = RRAM_WRITE_NS
    sram_rram_speed_ratio: float = SRAM_RRAM_SPEED_RATIO
    params_total: int = 1
    params_trainable: int = 1

    def __post_init__(self) -> None:
        for name in ("rram_endurance", "sram_endurance", "rram_write_ns", "sram_rram_speed_ratio"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"CostModel: {name} must be > 0, got {getattr(self, name)}")
        if self.params_total < 1 or self.params_trainable < 1:
            raise ParameterError("CostModel: parameter counts must be >= 1")
        if self.params_trainable > self.params_total:
            raise ParameterError(
                f"CostModel: params_trainable {self.params_trainable} > params_total {self.params_total}"
            )

    def endurance_for(self, method: str) -> int:
        """Endurance of the memory the method writes: RRAM for backprop, SRAM for adapters"""
        check_method(method)
        return self.rram_endurance if method == "backprop" else self.sram_endurance


def check_method(method: str) -> None:
    if method not in METHODS:
        raise ParameterError(f"unknown method '{method}', expected one of {METHODS}")


def updates_per_calibration(method: str, epochs: int, n_samples: int, batch: int = 1) -> int:
    """Weight-update events per calibration: epochs × ceil(n_samples / batch)"""
    check_method(method)
    if epochs < 0 or n_samples < 0 or batch < 1:
        raise ParameterError(
            f"updates_per_calibration: invalid epochs={epochs}, n_samples={n_samples}, batch={batch}"
        )
    return epochs * math.ceil(n_samples / batch)


def lifespan_calibrations(cm: CostModel, method: str, updates_per_cal: int) -> int:
    """Whole calibrations the written memory survives: floor(endurance / updates)

    Raises:
        ParameterError: If ``updates_per_cal`` is not positive
    """
    if updates_per_cal <= 0:
        raise ParameterError(f"lifespan_calibrations: updates_per_cal must be > 0, got {updates_per_cal}")
    return cm.endurance_for(method) // updates_per_cal


def rounded_lifespan(cm: CostModel, method: str, updates_per_cal: int) -> int:
    """Lifespan rounded half-up"""
    if updates_per_cal <= 0:
        raise ParameterError(f"rounded_lifespan: updates_per_cal must be > 0, got {updates_per_cal}")
    return math.floor(Fraction(cm.endurance_for(method), updates_per_cal) + Fraction(1, 2))


def update_time_seconds(params: int, write_ns: float = RRAM_WRITE_NS) -> float:
    """Cell-serial re-programming time of ``params`` weights"""
    if params < 1 or not write_ns > 0:
        raise ParameterError(f"update_time_seconds: invalid params={params}, write_ns={write_ns}")
    return params * write_ns * 1e-9


def speedup_factor(cm: CostModel, dataset_fraction: Fraction | float) -> Fraction:
    """(1 / dataset_fraction) × SRAM/RRAM speed ratio; compute time is not modelled

    Raises:
        ParameterError: If the fraction is outside (0, 1]
    """
    fraction = Fraction(dataset_fraction).limit_denominator(10**9)
    if not 0 < fraction <= 1:
        raise ParameterError(f"speedup_factor: dataset_fraction must be in (0, 1], got {dataset_fraction}")
    return Fraction(cm.sram_rram_speed_ratio) / fraction
