"""RRAM crossbar simulation"""

from rimc_calibration.rram.crossbar import (
    Crossbar,
    DriftSpec,
    ProgramSpec,
    WriteStats,
    apply_drift,
    crossbar_matmul,
    program_weights,
    read_effective_weights,
    write_stats,
)

__all__ = [
    "Crossbar",
    "DriftSpec",
    "ProgramSpec",
    "WriteStats",
    "apply_drift",
    "crossbar_matmul",
    "program_weights",
    "read_effective_weights",
    "write_stats",
]
