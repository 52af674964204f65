"""Full-backpropagation baseline that re-programs the crossbars after every update"""

import logging
import time

import numpy as np

from rimc_calibration.calibration.report import CalibrationReport
from rimc_calibration.calibration.settings import CalibConfig
from rimc_calibration.exceptions import DatasetError, TrainingError
from rimc_calibration.linalg import RngStream, Tensor
from rimc_calibration.nn import Dataset, Network
from rimc_calibration.nn.network import backward, forward_with_contexts, softmax_cross_entropy
from rimc_calibration.optim import make_optimizer
from rimc_calibration.rram import ProgramSpec, program_weights, read_effective_weights, write_stats

logger = logging.getLogger(__name__)


def backprop_baseline(
    student: Network,
    calib_set: Dataset,
    cfg: CalibConfig,
    prog: ProgramSpec | None = None,
    rng: RngStream | None = None,
) -> tuple[Network, CalibrationReport]:
    """Fine-tune every weight and bias with cross-entropy, one sample per step

    Each step reads the effective weights back from the crossbars, applies one
    optimizer update and writes the result back with write-and-verify, so every
    cell is written at least once per step. Batch-norm layers stay frozen.

    Args:
        student (Network): deployed student without adapters (not mutated)
        calib_set (Dataset): labelled calibration samples
        cfg (CalibConfig): epochs, lr and optimizer settings are used; every epoch runs
        prog (ProgramSpec | None): re-programming settings, normally the deployment's
        rng (RngStream | None): stream for sample order and programming noise

    Returns:
        tuple[Network, CalibrationReport]: updated copy and its report

    Raises:
        DatasetError: If the calibration set is empty
        TrainingError: If the loss becomes non-finite
    """
    if len(calib_set) == 0:
        raise DatasetError("backprop_baseline: calibration set is empty")
    started = time.perf_counter()
    rng = rng or RngStream(cfg.seed)
    prog = prog or ProgramSpec()
    tuned = student.copy()
    layers = dict(tuned.weighted_layers())
    writes_before = sum(write_stats(cb).total_writes for _, cb in tuned.crossbars())

    params: dict[str, Tensor] = {}
    for index, layer in layers.items():
        params[f"{index}.weight"] = layer.weight_matrix().copy()
        if layer.bias is not None:
            params[f"{index}.bias"] = layer.bias
    optimizer = make_optimizer(cfg.optimizer, cfg.lr, cfg.momentum, (cfg.beta1, cfg.beta2), cfg.eps)

    report = CalibrationReport(method="backprop", config=cfg.to_dict())
    step = 0
    for epoch in range(cfg.epochs):
        order = rng.child(0).child(epoch).permutation(len(calib_set))
        losses = []
        for sample in order:
            logits, contexts = forward_with_contexts(tuned, calib_set.inputs[sample : sample + 1])
            loss, grad = softmax_cross_entropy(logits, calib_set.labels[sample : sample + 1])
            if not np.isfinite(loss):
                raise TrainingError(f"backprop_baseline: loss diverged to {loss} at epoch {epoch}")
            layer_grads = backward(tuned, contexts, grad)
            grads = {f"{i}.{name}": g for i, per_layer in layer_grads.items() for name, g in per_layer.items()}

            for index, layer in layers.items():
                params[f"{index}.weight"][...] = read_effective_weights(layer.crossbar)  # type: ignore[arg-type]
            optimizer.step(params, grads)
            for index, layer in layers.items():
                layer.crossbar = program_weights(
                    params[f"{index}.weight"],
                    layer.crossbar.g_max,  # type: ignore[union-attr]
                    prog,
                    rng.child(1).child(step).child(index),
                    crossbar=layer.crossbar,
                )
            step += 1
            losses.append(loss)
        report.loss_curve.append(float(np.mean(losses)))
        logger.info(f"backprop_baseline: epoch {epoch + 1}/{cfg.epochs} loss {report.loss_curve[-1]:.6f}")

    report.weight_params = sum(layer.d * layer.k for layer in layers.values())
    report.rram_writes = sum(write_stats(cb).total_writes for _, cb in tuned.crossbars()) - writes_before
    report.sram_updates = 0
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    logger.info(f"backprop_baseline: {step} steps, {report.rram_writes} RRAM cell writes")
    return tuned, report
