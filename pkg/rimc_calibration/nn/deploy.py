"""Program a trained teacher onto drifting RRAM crossbars"""

import logging

from rimc_calibration.config import G_MAX_US
from rimc_calibration.linalg import RngStream
from rimc_calibration.nn.layers import Network
from rimc_calibration.rram import DriftSpec, ProgramSpec, apply_drift, program_weights

logger = logging.getLogger(__name__)


def deploy_to_rimc(
    teacher: Network,
    drift: DriftSpec,
    prog: ProgramSpec | None = None,
    g_max: float = G_MAX_US,
    rng: RngStream | None = None,
) -> Network:
    """Build the student: every Dense/Conv weight matrix programmed and drifted

    Biases and batch-norm parameters stay digital. The teacher is not mutated. Layer
    ``i`` draws its programming and drift noise from ``rng.child(i)``.

    Args:
        teacher (Network): trained, tensor-backed network
        drift (DriftSpec): drift event applied after programming
        prog (ProgramSpec | None): write-and-verify settings
        g_max (float): full-scale conductance
        rng (RngStream | None): master stream, defaults to ``RngStream(drift.seed)``

    Returns:
        Network: crossbar-backed student
    """
    rng = rng or RngStream(drift.seed)
    prog = prog or ProgramSpec()
    student = teacher.strip_adapters()

    for index, layer in student.weighted_layers():
        layer_rng = rng.child(index)
        crossbar = program_weights(layer.weight_matrix(), g_max, prog, layer_rng.child(0))
        layer.crossbar = apply_drift(crossbar, drift, layer_rng.child(1))
        layer.weight = None
        logger.debug(f"deploy_to_rimc: layer {index} programmed ({layer.d}x{layer.k})")

    student.metadata = {
        **teacher.metadata,
        "deployed": True,
        "rho": drift.rho,
        "mu_rel": drift.mu_rel,
        "drift_seed": drift.seed,
        "drift_accumulate": drift.accumulate,
    }
    logger.info(f"deploy_to_rimc: {len(student.weighted_layers())} layers deployed at rho={drift.rho}")
    return student
