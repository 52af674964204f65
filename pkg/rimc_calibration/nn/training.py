"""Teacher training and evaluation"""

import logging
from dataclasses import dataclass

import numpy as np

from rimc_calibration.exceptions import DatasetError, TrainingError
from rimc_calibration.linalg import RngStream, Tensor
from rimc_calibration.nn.datasets import Dataset
from rimc_calibration.nn.layers import BatchNormFrozen, Network, WeightedLayer
from rimc_calibration.nn.network import (
    backward,
    forward,
    forward_with_contexts,
    layer_forward,
    predict,
    softmax_cross_entropy,
)
from rimc_calibration.optim import Sgd

logger = logging.getLogger(__name__)

BN_INIT_SAMPLES = 512


@dataclass(frozen=True)
class TrainHyper:
    """Teacher training hyper-parameters"""

    lr: float = 0.05
    momentum: float = 0.9
    epochs: int = 20
    batch: int = 32
    seed: int = 0


def initialize_batchnorm_statistics(net: Network, x: Tensor) -> None:
    """Set every BN layer's mean/var from one pass over ``x`` (stats frozen afterwards)"""
    out = x
    for layer in net.layers:
        if isinstance(layer, BatchNormFrozen):
            axes = (0,) if out.ndim == 2 else (0, 2, 3)
            layer.mean = out.mean(axis=axes)
            layer.var = np.maximum(out.var(axis=axes), layer.eps)
        out, _ = layer_forward(layer, out)


def _trainable(net: Network) -> dict[str, Tensor]:
    """Named views of the parameters updated during teacher training"""
    params: dict[str, Tensor] = {}
    for i, layer in enumerate(net.layers):
        if isinstance(layer, WeightedLayer):
            if layer.weight is None:
                raise TrainingError(f"train_teacher: layer {i} is crossbar-backed")
            params[f"{i}.weight"] = layer.weight
            if layer.bias is not None:
                params[f"{i}.bias"] = layer.bias
        elif isinstance(layer, BatchNormFrozen):
            params[f"{i}.scale"] = layer.scale
            params[f"{i}.shift"] = layer.shift
    return params


def train_teacher(net: Network, train: Dataset, hyper: TrainHyper) -> Network:
    """Supervised cross-entropy training with mini-batch SGD + momentum

    Args:
        net (Network): initialized network (not mutated)
        train (Dataset): training split
        hyper (TrainHyper): hyper-parameters

    Returns:
        Network: trained copy; ``metadata`` records the per-epoch mean loss and the
        final train accuracy

    Raises:
        DatasetError: If the dataset is empty
        TrainingError: If the loss becomes non-finite
    """
    if len(train) == 0:
        raise DatasetError("train_teacher: training set is empty")
    trained = net.copy()
    if hyper.epochs == 0:
        return trained

    rng = RngStream(hyper.seed)
    initialize_batchnorm_statistics(trained, train.inputs[:BN_INIT_SAMPLES])
    params = _trainable(trained)
    optimizer = Sgd(lr=hyper.lr, momentum=hyper.momentum)
    epoch_losses: list[float] = []

    for epoch in range(hyper.epochs):
        order = rng.permutation(len(train))
        losses = []
        for start in range(0, len(train), hyper.batch):
            idx = order[start : start + hyper.batch]
            logits, contexts = forward_with_contexts(trained, train.inputs[idx])
            loss, grad = softmax_cross_entropy(logits, train.labels[idx])
            if not np.isfinite(loss):
                raise TrainingError(
                    f"train_teacher: loss diverged to {loss} at epoch {epoch}, "
                    f"batch starting {start} (lr={hyper.lr}, momentum={hyper.momentum})"
                )
            layer_grads = backward(trained, contexts, grad, train_batchnorm=True)
            grads = {
                f"{i}.{name}": g for i, per_layer in layer_grads.items() for name, g in per_layer.items()
            }
            optimizer.step(params, grads)
            losses.append(loss)
        epoch_losses.append(float(np.mean(losses)))
        logger.info(f"train_teacher: epoch {epoch + 1}/{hyper.epochs} loss {epoch_losses[-1]:.6f}")

    trained.metadata["epoch_losses"] = epoch_losses
    trained.metadata["train_accuracy"] = evaluate(trained, train)
    logger.info(f"train_teacher: train accuracy {trained.metadata['train_accuracy']:.4f}")
    return trained


def evaluate(net: Network, test: Dataset, batch: int = 1024) -> float:
    """Top-1 accuracy; argmax ties resolve to the lowest class index

    Raises:
        DatasetError: If the dataset is empty
    """
    if len(test) == 0:
        raise DatasetError("evaluate: dataset is empty")
    correct = 0
    for start in range(0, len(test), batch):
        logits = forward(net, test.inputs[start : start + batch]).logits
        correct += int(np.count_nonzero(predict(logits) == test.labels[start : start + batch]))
    return correct / len(test)
