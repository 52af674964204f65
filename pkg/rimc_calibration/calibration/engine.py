"""Feature-based, layer-wise calibration with DoRA/LoRA adapters"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from rimc_calibration.adapters import (
    DoraAdapter,
    LoraAdapter,
    adapter_forward,
    init_dora,
    init_lora,
    merge_for_inference,
    network_parameter_ratio,
    quantization_forward_error,
    quantize_int8,
)
from rimc_calibration.adapters.base import WeightSource, resolve_weights
from rimc_calibration.calibration.features import FeatureCache, LayerFeatures
from rimc_calibration.calibration.gradients import adapter_gradients, mse_loss
from rimc_calibration.calibration.report import CalibrationReport, LayerReport
from rimc_calibration.calibration.settings import CalibConfig
from rimc_calibration.exceptions import AdapterStateError, CalibrationError, ParameterError
from rimc_calibration.linalg import RngStream, Tensor
from rimc_calibration.nn import Network, WeightedLayer
from rimc_calibration.optim import make_optimizer
from rimc_calibration.rram import write_stats

logger = logging.getLogger(__name__)


@dataclass
class LayerCalibration:
    """Result of ``calibrate_layer``"""

    adapter: DoraAdapter | LoraAdapter
    loss_curve: list[float]
    initial_loss: float
    steps: int
    no_improvement: bool


def _adapter_params(ad: DoraAdapter | LoraAdapter) -> dict[str, Tensor]:
    params = {"a": ad.a, "b": ad.b}
    if isinstance(ad, DoraAdapter):
        params["m"] = ad.m
    return params


def calibrate_layer(
    w_r: WeightSource,
    ad: DoraAdapter | LoraAdapter,
    x_l: Tensor,
    f_teacher: Tensor,
    cfg: CalibConfig,
    rows_per_sample: int = 1,
    rng: RngStream | None = None,
    layer_index: int = 0,
) -> LayerCalibration:
    """Minimize MSE(F_teacher, adapter(x_l; W_r)) over A, B (and M)

    Each epoch visits every calibration sample once in mini-batches of ``cfg.batch``
    samples. DoRA in activation_norm mode normalizes over the batch, so it takes the same
    number of steps on the whole calibration batch instead. The loss over the whole calibration batch is recorded after every epoch;
    the loop stops once it reaches ``cfg.loss_threshold`` or after ``cfg.epochs``
    epochs. W_r is only read. If the final loss exceeds the initial loss the
    adapter reverts to its starting state and ``no_improvement`` is set.

    Args:
        w_r (WeightSource): frozen drifted weights (tensor or crossbar)
        ad (DoraAdapter | LoraAdapter): unmerged adapter (not mutated)
        x_l (Tensor): teacher input of the layer, m×d
        f_teacher (Tensor): teacher pre-bias feature, m×k
        cfg (CalibConfig): calibration settings
        rows_per_sample (int): rows of x_l per calibration sample (conv patches)
        rng (RngStream | None): stream for mini-batch shuffling
        layer_index (int): used in logs and errors

    Returns:
        LayerCalibration: trained adapter copy and loss history

    Raises:
        AdapterStateError: If the adapter is merged
        CalibrationError: If the loss becomes non-finite
        ParameterError: If activation_norm gets fewer than two input rows
    """
    if isinstance(ad, DoraAdapter) and ad.merged:
        raise AdapterStateError(f"calibrate_layer: layer {layer_index} adapter is merged")
    full_batch = isinstance(ad, DoraAdapter) and ad.mode == "activation_norm"
    if full_batch and x_l.shape[0] < 2:
        raise ParameterError(
            f"calibrate_layer: layer {layer_index} activation_norm needs at least 2 input rows, "
            f"got {x_l.shape[0]}"
        )
    w = resolve_weights(w_r)
    rng = rng or RngStream(cfg.seed, (layer_index,))
    entry = LayerFeatures(layer_index, x_l, f_teacher, rows_per_sample)

    start = ad.copy()
    trained = ad.copy()
    params = _adapter_params(trained)
    optimizer = make_optimizer(cfg.optimizer, cfg.lr, cfg.momentum, (cfg.beta1, cfg.beta2), cfg.eps)

    def full_loss() -> float:
        loss, _ = mse_loss(adapter_forward(x_l, w, trained), f_teacher)
        if not np.isfinite(loss):
            raise CalibrationError(f"calibrate_layer: non-finite loss on layer {layer_index}", layer_index)
        return loss

    initial_loss = full_loss()
    loss_curve: list[float] = []
    steps = 0
    loss = initial_loss

    for epoch in range(cfg.epochs):
        if loss <= cfg.loss_threshold:
            break
        order = rng.permutation(entry.num_samples)
        for begin in range(0, entry.num_samples, cfg.batch):
            if full_batch:
                x_batch, target = x_l, f_teacher
            else:
                rows = entry.sample_rows(order[begin : begin + cfg.batch])
                x_batch, target = x_l[rows], f_teacher[rows]
            _, g_out = mse_loss(adapter_forward(x_batch, w, trained), target)
            grads = adapter_gradients(x_batch, w, trained, g_out).as_dict()
            optimizer.step(params, grads)
            steps += 1
        loss = full_loss()
        loss_curve.append(loss)
        logger.debug(f"calibrate_layer: layer {layer_index} epoch {epoch + 1} loss {loss:.3e}")

    no_improvement = loss > initial_loss
    if no_improvement:
        logger.warning(
            f"calibrate_layer: layer {layer_index} loss rose {initial_loss:.3e} -> {loss:.3e}; "
            "keeping the initial adapter"
        )
        trained = start

    return LayerCalibration(
        adapter=trained,
        loss_curve=loss_curve,
        initial_loss=initial_loss,
        steps=steps,
        no_improvement=no_improvement,
    )


def init_adapter(
    w_r: WeightSource, cfg: CalibConfig, rng: RngStream, calib_x: Tensor | None = None
) -> DoraAdapter | LoraAdapter:
    """Fresh adapter of the configured kind, rank capped at min(d, k)

    ``calib_x`` sets the activation_norm magnitudes so the layer starts at x · W_r.
    """
    w = resolve_weights(w_r)
    rank = min(cfg.rank, *w.shape)
    if cfg.adapter_kind == "lora":
        return init_lora(w, rank, rng)
    return init_dora(w, rank, rng, cfg.mode, calib_x)


def _calibrate_one(
    index: int, layer: WeightedLayer, entry: LayerFeatures, cfg: CalibConfig
) -> tuple[int, LayerCalibration]:
    if layer.crossbar is None:
        raise ParameterError(f"calibrate_network: layer {index} is not deployed on a crossbar")
    layer_rng = RngStream(cfg.seed, (index,))
    w = resolve_weights(layer.crossbar)
    ad = init_adapter(w, cfg, layer_rng.child(0), entry.inputs)
    result = calibrate_layer(
        w, ad, entry.inputs, entry.features, cfg, entry.rows_per_sample, layer_rng.child(1), index
    )
    logger.info(
        f"calibrate_network: layer {index} ({layer.kind} {layer.d}x{layer.k}) loss "
        f"{result.initial_loss:.3e} -> {(result.loss_curve or [result.initial_loss])[-1]:.3e} "
        f"in {len(result.loss_curve)} epochs"
    )
    return index, result


def calibrate_network(
    student: Network, teacher_cache: FeatureCache, cfg: CalibConfig, order: list[int] | None = None
) -> tuple[Network, CalibrationReport]:
    """Calibrate every weighted layer independently from the teacher's cached inputs

    Layer l consumes the teacher's input X_l, so layers are decoupled; they run on a
    pool of ``cfg.workers`` threads and results are joined in layer order. Crossbars,
    biases and batch-norm parameters are never written. activation_norm adapters are
    always merged on the calibration inputs. With ``cfg.quantize`` each layer records the largest int8 forward
    error on its calibration inputs.

    Args:
        student (Network): deployed student (not mutated)
        teacher_cache (FeatureCache): features from the same calibration inputs
        cfg (CalibConfig): calibration settings
        order (list[int] | None): submission order of layer indices

    Returns:
        tuple[Network, CalibrationReport]: student copy with adapters and the report
        (accuracies are left for the caller to fill in)
    """
    started = time.perf_counter()
    calibrated = student.copy()
    writes_before = sum(write_stats(cb).total_writes for _, cb in calibrated.crossbars())

    layers = dict(calibrated.weighted_layers())
    indices = order if order is not None else sorted(layers)
    if sorted(indices) != sorted(layers):
        raise ParameterError(f"calibrate_network: order {indices} does not cover layers {sorted(layers)}")

    jobs = [(i, layers[i], teacher_cache.for_layer(i), cfg) for i in indices]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = dict(pool.map(lambda job: _calibrate_one(*job), jobs))
    else:
        results = dict(_calibrate_one(*job) for job in jobs)

    report = CalibrationReport(method=cfg.adapter_kind, config=cfg.to_dict())
    for index in sorted(results):
        layer, result = layers[index], results[index]
        adapter = result.adapter
        calib_x = teacher_cache.for_layer(index).inputs
        if isinstance(adapter, DoraAdapter) and (cfg.merge or adapter.mode == "activation_norm"):
            adapter = merge_for_inference(adapter, layer.crossbar, calib_x)  # type: ignore[arg-type]
        quant_error = None
        if cfg.quantize:
            quant_error = quantization_forward_error(calib_x, layer.crossbar, adapter)  # type: ignore[arg-type]
            logger.info(f"calibrate_network: layer {index} int8 forward error {quant_error:.3e}")
            adapter = quantize_int8(adapter)
        layer.adapter = adapter
        report.layers.append(
            LayerReport(
                layer_index=index,
                kind=layer.kind,
                d=layer.d,
                k=layer.k,
                initial_loss=result.initial_loss,
                loss_curve=result.loss_curve,
                steps=result.steps,
                no_improvement=result.no_improvement,
                quant_error=quant_error,
            )
        )

    gamma = network_parameter_ratio(calibrated)
    report.adapter_params = sum(layer.adapter.num_params for _, layer in calibrated.weighted_layers())  # type: ignore[union-attr]
    report.weight_params = sum(layer.d * layer.k for _, layer in calibrated.weighted_layers())
    report.gamma_total = float(gamma)
    report.rram_writes = sum(write_stats(cb).total_writes for _, cb in calibrated.crossbars()) - writes_before
    report.sram_updates = max((r.steps for r in report.layers), default=0)
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    return calibrated, report
