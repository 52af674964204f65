"""Self-describing model file: text header followed by little-endian tensor payloads

Layout::

    RIMC-MODEL <version>\\n
    <header length in bytes>\\n
    <JSON header>
    <payload>

The JSON header holds the format version, input shape, class count, metadata and the
layer list. Every tensor appears in the header as ``{"offset", "shape", "dtype"}`` with
``offset`` relative to the payload start. Float tensors are written as ``<f8`` (or
``<f4`` when saving with ``float_dtype="float32"``), write counters as ``<i8`` and int8
adapter codes as ``|i1``. Crossbar layers record ``g_max`` and ``w_max``.
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from rimc_calibration.adapters import DoraAdapter, LoraAdapter, QuantizedAdapter, QuantizedTensor
from rimc_calibration.config import MODEL_FILE_MAGIC, MODEL_FORMAT_VERSION
from rimc_calibration.exceptions import ModelFormatError, ModelVersionError
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
    WeightedLayer,
)
from rimc_calibration.rram import Crossbar

logger = logging.getLogger(__name__)

FLOAT_DTYPES = {"float64": "<f8", "float32": "<f4"}


class _PayloadWriter:
    def __init__(self, float_dtype: str) -> None:
        self.chunks: list[bytes] = []
        self.size = 0
        self.float_dtype = FLOAT_DTYPES[float_dtype]

    def add(self, array: np.ndarray, dtype: str | None = None) -> dict[str, Any]:
        if dtype is None:
            dtype = self.float_dtype if array.dtype.kind == "f" else "<i8"
        data = np.ascontiguousarray(array, dtype=np.dtype(dtype)).tobytes()
        ref = {"offset": self.size, "shape": list(array.shape), "dtype": dtype}
        self.chunks.append(data)
        self.size += len(data)
        return ref


def _adapter_header(ad: Any, writer: _PayloadWriter) -> dict[str, Any]:
    if isinstance(ad, QuantizedAdapter):
        return {
            "type": "int8",
            "kind": ad.kind,
            "mode": ad.mode,
            "tensors": {
                name: {**writer.add(q.codes, "|i1"), "scale": q.scale} for name, q in ad.tensors.items()
            },
        }
    if isinstance(ad, LoraAdapter):
        return {"type": "lora", "tensors": {"a": writer.add(ad.a), "b": writer.add(ad.b)}}
    tensors = {"a": writer.add(ad.a), "b": writer.add(ad.b), "m": writer.add(ad.m)}
    if ad.merged_scale is not None:
        tensors["merged_scale"] = writer.add(ad.merged_scale)
    return {"type": "dora", "mode": ad.mode, "tensors": tensors}


def _layer_header(layer: LayerSpec, writer: _PayloadWriter) -> dict[str, Any]:
    entry: dict[str, Any] = {"kind": layer.kind}
    if isinstance(layer, Dense):
        entry.update(in_features=layer.in_features, out_features=layer.out_features)
    elif isinstance(layer, Conv2d):
        entry.update(
            c_in=layer.c_in, c_out=layer.c_out, kh=layer.kh, kw=layer.kw, stride=layer.stride, pad=layer.pad
        )
    elif isinstance(layer, BatchNormFrozen):
        entry.update(
            eps=layer.eps,
            tensors={name: writer.add(getattr(layer, name)) for name in ("scale", "shift", "mean", "var")},
        )
    elif isinstance(layer, (MaxPool, AvgPool)):
        entry.update(h=layer.h, w=layer.w)

    if isinstance(layer, WeightedLayer):
        tensors = {}
        if layer.weight is not None:
            tensors["weight"] = writer.add(layer.weight)
        if layer.bias is not None:
            tensors["bias"] = writer.add(layer.bias)
        entry["tensors"] = tensors
        if layer.crossbar is not None:
            cb = layer.crossbar
            entry["crossbar"] = {
                "g_max": cb.g_max,
                "w_max": cb.w_max,
                "tensors": {
                    name: writer.add(getattr(cb, name))
                    for name in ("g_plus", "g_minus", "write_counts", "target_g_plus", "target_g_minus")
                },
            }
        if layer.adapter is not None:
            entry["adapter"] = _adapter_header(layer.adapter, writer)
    return entry


def save_model(net: Network, path: str | Path, float_dtype: str = "float64") -> None:
    """Write ``net`` to ``path``

    Args:
        net (Network): network to save
        path (str | Path): destination file
        float_dtype (str): ``float64`` (default, lossless) or ``float32``
    """
    writer = _PayloadWriter(float_dtype)
    header = {
        "format_version": MODEL_FORMAT_VERSION,
        "input_shape": list(net.input_shape),
        "num_classes": net.num_classes,
        "metadata": net.metadata,
        "layers": [_layer_header(layer, writer) for layer in net.layers],
        "payload_bytes": writer.size,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode()
    preamble = MODEL_FILE_MAGIC + f" {MODEL_FORMAT_VERSION}\n{len(header_bytes)}\n".encode()
    Path(path).write_bytes(preamble + header_bytes + b"".join(writer.chunks))
    logger.info(f"save_model: wrote {len(net.layers)} layers to {path}")


class _PayloadReader:
    def __init__(self, data: bytes, start: int, declared: int) -> None:
        self.data = data
        self.start = start
        if len(data) - start < declared:
            raise ModelFormatError(
                f"payload truncated: {len(data) - start} of {declared} bytes present", len(data)
            )

    def get(self, ref: dict[str, Any]) -> np.ndarray:
        try:
            dtype = np.dtype(ref["dtype"])
            shape = tuple(int(s) for s in ref["shape"])
            offset = self.start + int(ref["offset"])
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"bad tensor reference {ref!r}: {e}", self.start) from e
        count = int(np.prod(shape, dtype=np.int64))
        end = offset + count * dtype.itemsize
        if end > len(self.data):
            raise ModelFormatError(f"tensor runs past end of file ({end} > {len(self.data)})", offset)
        array = np.frombuffer(self.data, dtype=dtype, count=count, offset=offset).reshape(shape)
        if dtype.kind == "f":
            return array.astype(np.float64)
        if dtype.kind == "i" and dtype.itemsize == 1:
            return array.astype(np.int8)
        return array.astype(np.int64)


def _read_adapter(entry: dict[str, Any], reader: _PayloadReader) -> Any:
    tensors = entry["tensors"]
    if entry["type"] == "int8":
        return QuantizedAdapter(
            kind=entry["kind"],
            mode=entry.get("mode", "weight_norm"),
            tensors={
                name: QuantizedTensor(codes=reader.get(ref), scale=float(ref["scale"]))
                for name, ref in tensors.items()
            },
        )
    if entry["type"] == "lora":
        return LoraAdapter(a=reader.get(tensors["a"]), b=reader.get(tensors["b"]))
    merged = tensors.get("merged_scale")
    return DoraAdapter(
        a=reader.get(tensors["a"]),
        b=reader.get(tensors["b"]),
        m=reader.get(tensors["m"]),
        mode=entry["mode"],
        merged_scale=None if merged is None else reader.get(merged),
    )


def _read_layer(entry: dict[str, Any], reader: _PayloadReader) -> LayerSpec:
    kind = entry["kind"]
    if kind == "relu":
        return ReLU()
    if kind == "flatten":
        return Flatten()
    if kind == "maxpool":
        return MaxPool(entry["h"], entry["w"])
    if kind == "avgpool":
        return AvgPool(entry["h"], entry["w"])
    if kind == "batchnorm":
        t = entry["tensors"]
        return BatchNormFrozen(
            scale=reader.get(t["scale"]),
            shift=reader.get(t["shift"]),
            mean=reader.get(t["mean"]),
            var=reader.get(t["var"]),
            eps=float(entry["eps"]),
        )

    layer: WeightedLayer
    if kind == "dense":
        layer = Dense(in_features=entry["in_features"], out_features=entry["out_features"])
    elif kind == "conv2d":
        layer = Conv2d(
            c_in=entry["c_in"],
            c_out=entry["c_out"],
            kh=entry["kh"],
            kw=entry["kw"],
            stride=entry["stride"],
            pad=entry["pad"],
        )
    else:
        raise KeyError(f"unknown layer kind '{kind}'")

    tensors = entry.get("tensors", {})
    if "weight" in tensors:
        layer.weight = reader.get(tensors["weight"])
    if "bias" in tensors:
        layer.bias = reader.get(tensors["bias"])
    if "crossbar" in entry:
        cb = entry["crossbar"]
        t = cb["tensors"]
        layer.crossbar = Crossbar(
            g_plus=reader.get(t["g_plus"]),
            g_minus=reader.get(t["g_minus"]),
            g_max=float(cb["g_max"]),
            w_max=float(cb["w_max"]),
            write_counts=reader.get(t["write_counts"]),
            target_g_plus=reader.get(t["target_g_plus"]),
            target_g_minus=reader.get(t["target_g_minus"]),
        )
    if "adapter" in entry:
        layer.adapter = _read_adapter(entry["adapter"], reader)
    return layer


def load_model(path: str | Path) -> Network:
    """Read a model file written by ``save_model``

    Raises:
        ModelFormatError: If the file is malformed; carries the byte offset
        ModelVersionError: If the format version is not supported
        OSError: If the file cannot be read
    """
    data = Path(path).read_bytes()

    first_nl = data.find(b"\n")
    if first_nl < 0 or not data.startswith(MODEL_FILE_MAGIC + b" "):
        raise ModelFormatError("missing RIMC-MODEL preamble", 0)
    try:
        version = int(data[len(MODEL_FILE_MAGIC) + 1 : first_nl])
    except ValueError as e:
        raise ModelFormatError("unreadable format version", len(MODEL_FILE_MAGIC) + 1) from e
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"format version {version} not supported (expected {MODEL_FORMAT_VERSION})",
            len(MODEL_FILE_MAGIC) + 1,
        )

    second_nl = data.find(b"\n", first_nl + 1)
    if second_nl < 0:
        raise ModelFormatError("missing header length", first_nl + 1)
    try:
        header_len = int(data[first_nl + 1 : second_nl])
    except ValueError as e:
        raise ModelFormatError("unreadable header length", first_nl + 1) from e

    header_start = second_nl + 1
    header_end = header_start + header_len
    if header_end > len(data):
        raise ModelFormatError(f"header truncated ({len(data) - header_start} of {header_len} bytes)", len(data))
    try:
        header = json.loads(data[header_start:header_end])
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        position = getattr(e, "pos", 0) or getattr(e, "start", 0)
        raise ModelFormatError(f"header is not valid JSON: {e}", header_start + position) from e

    try:
        reader = _PayloadReader(data, header_end, int(header["payload_bytes"]))
        layers = [_read_layer(entry, reader) for entry in header["layers"]]
        net = Network(
            layers=layers,
            input_shape=tuple(header["input_shape"]),
            num_classes=int(header["num_classes"]),
            metadata=header.get("metadata", {}),
        )
        net.validate()
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"malformed header entry: {e}", header_start) from e

    logger.info(f"load_model: read {len(net.layers)} layers from {path}")
    return net
