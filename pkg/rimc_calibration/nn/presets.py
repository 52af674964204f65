"""Desk-scale reference topologies"""

import numpy as np

from rimc_calibration.config import CNN_CHANNELS, MLP_HIDDEN, PRESETS
from rimc_calibration.exceptions import ParameterError
from rimc_calibration.linalg import RngStream, conv_output_size
from rimc_calibration.nn.layers import (
    BatchNormFrozen,
    Conv2d,
    Dense,
    Flatten,
    LayerSpec,
    MaxPool,
    Network,
    ReLU,
)


def _he_normal(rng: RngStream, d: int, k: int) -> np.ndarray:
    return rng.generator.normal(0.0, np.sqrt(2.0 / d), size=(d, k))


def _dense(rng: RngStream, d: int, k: int) -> Dense:
    return Dense(in_features=d, out_features=k, weight=_he_normal(rng, d, k), bias=np.zeros(k))


def _conv(rng: RngStream, c_in: int, c_out: int) -> Conv2d:
    layer = Conv2d(c_in=c_in, c_out=c_out, kh=3, kw=3, stride=1, pad=1)
    layer.weight = _he_normal(rng, layer.d, layer.k)
    layer.bias = np.zeros(c_out)
    return layer


def build_mlp(input_shape: tuple[int, ...], num_classes: int, rng: RngStream) -> Network:
    """input → 128 → 64 → classes with ReLU between (image samples are flattened first)"""
    input_dim = int(np.prod(input_shape))
    sizes = (input_dim, *MLP_HIDDEN, num_classes)
    layers: list[LayerSpec] = [Flatten()] if len(input_shape) > 1 else []
    for i, (d, k) in enumerate(zip(sizes[:-1], sizes[1:])):
        layers.append(_dense(rng.child(i), d, k))
        if i < len(sizes) - 2:
            layers.append(ReLU())
    return Network(layers=layers, input_shape=tuple(input_shape), num_classes=num_classes, metadata={"preset": "mlp"})


def build_cnn(input_shape: tuple[int, int, int], num_classes: int, rng: RngStream) -> Network:
    """Conv 3×3 → BN → ReLU → MaxPool2, twice, then Flatten → Dense"""
    c, h, w = input_shape
    layers: list[LayerSpec] = []
    channels = c
    for i, c_out in enumerate(CNN_CHANNELS):
        layers += [_conv(rng.child(i), channels, c_out), BatchNormFrozen.identity(c_out), ReLU(), MaxPool(2, 2)]
        h = conv_output_size(h, 3, 1, 1) // 2
        w = conv_output_size(w, 3, 1, 1) // 2
        channels = c_out
    if h < 1 or w < 1:
        raise ParameterError(f"build_cnn: input {input_shape} too small for two pooling stages")
    layers += [Flatten(), _dense(rng.child(len(CNN_CHANNELS)), channels * h * w, num_classes)]
    return Network(layers=layers, input_shape=tuple(input_shape), num_classes=num_classes, metadata={"preset": "cnn"})


def build_preset(name: str, input_shape: tuple[int, ...], num_classes: int, rng: RngStream) -> Network:
    """Build a named preset for the given sample shape

    Raises:
        ParameterError: If the preset is unknown or does not fit the input shape
    """
    if name not in PRESETS:
        raise ParameterError(f"unknown preset '{name}', expected one of {PRESETS}")
    if name == "mlp":
        return build_mlp(tuple(input_shape), num_classes, rng)
    if len(input_shape) != 3:
        raise ParameterError(f"cnn preset needs (C, H, W) samples, got {input_shape}")
    return build_cnn(input_shape, num_classes, rng)  # type: ignore[arg-type]
