"""Endurance, lifespan and speed cost model"""

from rimc_calibration.cost.comparison import ComparisonRow, ComparisonTable, build_comparison_table
from rimc_calibration.cost.cost_model import (
    CostModel,
    lifespan_calibrations,
    rounded_lifespan,
    speedup_factor,
    update_time_seconds,
    updates_per_calibration,
)

__all__ = [
    "ComparisonRow",
    "ComparisonTable",
    "CostModel",
    "build_comparison_table",
    "lifespan_calibrations",
    "rounded_lifespan",
    "speedup_factor",
    "update_time_seconds",
    "updates_per_calibration",
]
