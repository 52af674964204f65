"""Forward and backward passes over a layer stack"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from rimc_calibration.exceptions import ParameterError, ShapeError
from rimc_calibration.linalg import (
    Tensor,
    col2im,
    conv_output_size,
    im2col,
    image_to_rows,
    rows_to_image,
)
from rimc_calibration.nn.layers import (
    AvgPool,
    BatchNormFrozen,
    Conv2d,
    Dense,
    Flatten,
    LayerSpec,
    MaxPool,
    Network,
    ReLU,
)


@dataclass(frozen=True)
class LayerCapture:
    """Matrix-form input and pre-bias feature of one weighted layer

    For conv layers ``inputs`` is the im2col-unrolled patch matrix and every sample
    contributes ``rows_per_sample`` consecutive rows.
    """

    layer_index: int
    inputs: Tensor
    features: Tensor
    rows_per_sample: int


@dataclass
class ForwardResult:
    logits: Tensor
    captures: list[LayerCapture] | None = None


def _bn_view(layer: BatchNormFrozen, x: Tensor) -> tuple[Tensor, ...]:
    """Broadcast BN parameters over (n, C) or (n, C, H, W)"""
    shape = (1, -1) if x.ndim == 2 else (1, -1, 1, 1)
    if x.shape[1] != layer.channels:
        raise ShapeError(f"batchnorm expects {layer.channels} channels, got {x.shape[1]}")
    inv_std = 1.0 / np.sqrt(layer.var + layer.eps)
    return (
        layer.scale.reshape(shape),
        layer.shift.reshape(shape),
        layer.mean.reshape(shape),
        inv_std.reshape(shape),
    )


def _pool_windows(layer: MaxPool | AvgPool, x: Tensor) -> Tensor:
    """(n, C, H, W) -> (n, C, H', W', h·w) non-overlapping windows"""
    if x.ndim != 4:
        raise ShapeError(f"{layer.kind} expects a 4-D batch, got {x.shape}")
    n, c, h, w = x.shape
    oh, ow = h // layer.h, w // layer.w
    if oh < 1 or ow < 1:
        raise ShapeError(f"{layer.kind} window {layer.h}x{layer.w} larger than input {h}x{w}")
    cropped = x[:, :, : oh * layer.h, : ow * layer.w]
    return (
        cropped.reshape(n, c, oh, layer.h, ow, layer.w)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(n, c, oh, ow, layer.h * layer.w)
    )


def layer_forward(layer: LayerSpec, x: Tensor) -> tuple[Tensor, dict[str, Any]]:
    """Apply one layer, returning its output and a backward context"""
    if isinstance(layer, Dense):
        if x.ndim != 2:
            raise ShapeError(f"dense expects a 2-D batch, got {x.shape}")
        features = layer.project(x)
        return layer.add_bias(features), {"inputs": x, "features": features, "rows": 1}

    if isinstance(layer, Conv2d):
        if x.ndim != 4 or x.shape[1] != layer.c_in:
            raise ShapeError(f"conv2d expects (n, {layer.c_in}, H, W), got {x.shape}")
        n, _, h, w = x.shape
        oh = conv_output_size(h, layer.kh, layer.stride, layer.pad)
        ow = conv_output_size(w, layer.kw, layer.stride, layer.pad)
        cols = im2col(x, layer.kh, layer.kw, layer.stride, layer.pad)
        features = layer.project(cols)
        out = rows_to_image(layer.add_bias(features), n, oh, ow)
        return out, {"inputs": cols, "features": features, "rows": oh * ow, "x_shape": x.shape}

    if isinstance(layer, BatchNormFrozen):
        scale, shift, mean, inv_std = _bn_view(layer, x)
        x_hat = (x - mean) * inv_std
        return scale * x_hat + shift, {"x_hat": x_hat}

    if isinstance(layer, ReLU):
        return np.maximum(x, 0.0), {"mask": x > 0}

    if isinstance(layer, MaxPool):
        windows = _pool_windows(layer, x)
        arg = windows.argmax(axis=-1)
        out = np.take_along_axis(windows, arg[..., None], axis=-1)[..., 0]
        return out, {"arg": arg, "x_shape": x.shape}

    if isinstance(layer, AvgPool):
        return _pool_windows(layer, x).mean(axis=-1), {"x_shape": x.shape}

    if isinstance(layer, Flatten):
        return x.reshape(x.shape[0], -1), {"x_shape": x.shape}

    raise ParameterError(f"unknown layer type {type(layer).__name__}")


def forward(net: Network, x: Tensor, capture: bool = False) -> ForwardResult:
    """Deterministic forward pass

    Args:
        net (Network): layer stack
        x (Tensor): input batch matching ``net.input_shape``
        capture (bool): record each weighted layer's input and feature

    Returns:
        ForwardResult: logits and, when ``capture``, one LayerCapture per weighted layer

    Raises:
        ShapeError: If any layer rejects its input; the message names the layer index
    """
    captures: list[LayerCapture] | None = [] if capture else None
    out = x
    for index, layer in enumerate(net.layers):
        try:
            out, ctx = layer_forward(layer, out)
        except ShapeError as e:
            raise ShapeError(f"layer {index} ({layer.kind}): {e}") from e
        if captures is not None and isinstance(layer, (Dense, Conv2d)):
            captures.append(
                LayerCapture(
                    layer_index=index,
                    inputs=ctx["inputs"],
                    features=ctx["features"],
                    rows_per_sample=ctx["rows"],
                )
            )
    return ForwardResult(logits=out, captures=captures)


def forward_with_contexts(net: Network, x: Tensor) -> tuple[Tensor, list[dict[str, Any]]]:
    """Forward pass keeping every layer's backward context"""
    contexts = []
    out = x
    for index, layer in enumerate(net.layers):
        try:
            out, ctx = layer_forward(layer, out)
        except ShapeError as e:
            raise ShapeError(f"layer {index} ({layer.kind}): {e}") from e
        contexts.append(ctx)
    return out, contexts


def backward(
    net: Network, contexts: list[dict[str, Any]], grad_out: Tensor, train_batchnorm: bool = False
) -> dict[int, dict[str, Tensor]]:
    """Backpropagate ∂L/∂logits through the stack: ∂L/∂a_i = ∂L/∂a_{i+1}·Wᵀ

    Args:
        net (Network): network used for the forward pass
        contexts (list[dict]): contexts from ``forward_with_contexts``
        grad_out (Tensor): gradient with respect to the logits
        train_batchnorm (bool): also return BN scale/shift gradients

    Returns:
        dict[int, dict[str, Tensor]]: per layer index, gradients keyed by
        ``weight``/``bias`` (matrix form) or ``scale``/``shift``

    Raises:
        ParameterError: If a weighted layer carries an adapter
    """
    grads: dict[int, dict[str, Tensor]] = {}
    g = grad_out
    for index in range(len(net.layers) - 1, -1, -1):
        layer, ctx = net.layers[index], contexts[index]

        if isinstance(layer, (Dense, Conv2d)):
            if layer.adapter is not None:
                raise ParameterError(f"backward: layer {index} carries an adapter")
            rows = g if isinstance(layer, Dense) else image_to_rows(g)
            layer_grads = {"weight": ctx["inputs"].T @ rows}
            if layer.bias is not None:
                layer_grads["bias"] = rows.sum(axis=0)
            grads[index] = layer_grads
            if index == 0:
                break
            d_in = rows @ layer.weight_matrix().T
            if isinstance(layer, Conv2d):
                d_in = col2im(d_in, ctx["x_shape"], layer.kh, layer.kw, layer.stride, layer.pad)
            g = d_in

        elif isinstance(layer, BatchNormFrozen):
            scale, _, _, inv_std = _bn_view(layer, g)
            if train_batchnorm:
                axes = (0,) if g.ndim == 2 else (0, 2, 3)
                grads[index] = {
                    "scale": (g * ctx["x_hat"]).sum(axis=axes),
                    "shift": g.sum(axis=axes),
                }
            g = g * scale * inv_std

        elif isinstance(layer, ReLU):
            g = g * ctx["mask"]

        elif isinstance(layer, MaxPool):
            n, c, h, w = ctx["x_shape"]
            oh, ow = ctx["arg"].shape[2:]
            windows = np.zeros((n, c, oh, ow, layer.h * layer.w))
            np.put_along_axis(windows, ctx["arg"][..., None], g[..., None], axis=-1)
            g = _unpool(windows, layer, ctx["x_shape"])

        elif isinstance(layer, AvgPool):
            windows = np.repeat(g[..., None] / (layer.h * layer.w), layer.h * layer.w, axis=-1)
            g = _unpool(windows, layer, ctx["x_shape"])

        elif isinstance(layer, Flatten):
            g = g.reshape(ctx["x_shape"])

    return grads


def _unpool(windows: Tensor, layer: MaxPool | AvgPool, x_shape: tuple[int, ...]) -> Tensor:
    """Scatter (n, C, H', W', h·w) window gradients back to (n, C, H, W)"""
    n, c, h, w = x_shape
    oh, ow = windows.shape[2:4]
    grid = (
        windows.reshape(n, c, oh, ow, layer.h, layer.w)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(n, c, oh * layer.h, ow * layer.w)
    )
    out = np.zeros(x_shape)
    out[:, :, : oh * layer.h, : ow * layer.w] = grid
    return out


def softmax_cross_entropy(logits: Tensor, labels: np.ndarray) -> tuple[float, Tensor]:
    """Mean cross-entropy and its gradient with respect to the logits"""
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    n = logits.shape[0]
    loss = float(-log_probs[np.arange(n), labels].mean())
    grad = np.exp(log_probs)
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def predict(logits: Tensor) -> np.ndarray:
    """Argmax over classes; ties resolve to the lowest class index"""
    return np.argmax(logits, axis=1)
