"""Comparison table from the configured cost model"""

import logging
from fractions import Fraction
from pathlib import Path

from rimc_calibration.adapters import network_parameter_ratio
from rimc_calibration.config import REF_GAMMA_RESNET50_R4, REF_RESNET50_PARAMS
from rimc_calibration.cost import ComparisonTable, CostModel, build_comparison_table
from rimc_calibration.nn import load_model
from rimc_calibration.services.config_loader import ExperimentConfig


class CostService:
    """Builds the backprop vs adapter comparison for an ``ExperimentConfig``"""

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config

    def _gamma(self) -> tuple[Fraction | float, int, str]:
        """Adapter share, total parameter count and a label saying where they came from"""
        overrides = self.config.cost
        if overrides.gamma is not None:
            return overrides.gamma, overrides.params_total or REF_RESNET50_PARAMS, "configured"
        if self.config.model_file:
            net = load_model(self.config.model_file)
            if all(layer.adapter is not None for _, layer in net.weighted_layers()):
                weights = sum(layer.d * layer.k for _, layer in net.weighted_layers())
                return network_parameter_ratio(net), overrides.params_total or weights, "measured"
            logging.warning(
                f"CostService: {self.config.model_file} carries no adapters; using the reference-scale ratio"
            )
        return REF_GAMMA_RESNET50_R4, overrides.params_total or REF_RESNET50_PARAMS, "reference scale"

    def cost_model(self, params_total: int, gamma: Fraction | float) -> CostModel:
        overrides = self.config.cost
        return CostModel(
            rram_endurance=overrides.rram_endurance,
            sram_endurance=overrides.sram_endurance,
            rram_write_ns=overrides.rram_write_ns,
            sram_rram_speed_ratio=overrides.sram_rram_speed_ratio,
            params_total=params_total,
            params_trainable=max(1, min(params_total, round(params_total * float(gamma)))),
        )

    def comparison(self) -> ComparisonTable:
        gamma, params_total, label = self._gamma()
        overrides = self.config.cost
        return build_comparison_table(
            self.cost_model(params_total, gamma),
            gamma,
            epochs=overrides.epochs,
            backprop_samples=overrides.backprop_samples,
            backprop_update_samples=overrides.backprop_update_samples,
            adapter_samples=overrides.adapter_samples,
            adapter_method=next((m for m in self.config.calibration.methods if m != "backprop"), "dora"),
            gamma_label=label,
        )

    def write(self, out_dir: Path) -> tuple[Path, Path]:
        """Write ``cost.json`` and ``cost.csv``"""
        table = self.comparison()
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path, csv_path = out_dir / "cost.json", out_dir / "cost.csv"
        json_path.write_text(table.to_json() + "\n", encoding="utf-8")
        csv_path.write_text(table.to_csv(), encoding="utf-8")
        logging.info(f"CostService.write: comparison written to {json_path} and {csv_path}")
        return json_path, csv_path
