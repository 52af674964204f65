"""Calibration report: the unit of experiment output"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class LayerReport:
    """Outcome of calibrating one weighted layer"""

    layer_index: int
    kind: str
    d: int
    k: int
    initial_loss: float
    loss_curve: list[float]
    steps: int
    no_improvement: bool = False
    quant_error: float | None = None

    @property
    def final_loss(self) -> float:
        return self.loss_curve[-1] if self.loss_curve else self.initial_loss


@dataclass
class CalibrationReport:
    """Per-layer losses, accuracies, adapter overhead, write counts and timing

    ``loss_curve`` is the network-level epoch loss of the backprop baseline; adapter
    methods keep their curves per layer.
    """

    method: str
    layers: list[LayerReport] = field(default_factory=list)
    loss_curve: list[float] = field(default_factory=list)
    acc_teacher: float | None = None
    acc_drifted: float | None = None
    acc_calibrated: float | None = None
    adapter_params: int = 0
    weight_params: int = 0
    gamma_total: float = 0.0
    rram_writes: int = 0
    sram_updates: int = 0
    wall_ms: float = 0.0
    config: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        data = asdict(self)
        if not include_timing:
            data.pop("wall_ms")
        return data

    def to_json(self, include_timing: bool = False) -> str:
        """Structured text form; timing is excluded by default so output is reproducible"""
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)
