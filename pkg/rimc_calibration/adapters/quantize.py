"""Symmetric per-tensor int8 quantization of adapter state"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from rimc_calibration.adapters.dora import DoraAdapter
from rimc_calibration.adapters.lora import LoraAdapter
from rimc_calibration.config import INT8_MAX
from rimc_calibration.exceptions import ParameterError
from rimc_calibration.linalg import Tensor


@dataclass(frozen=True)
class QuantizedTensor:
    """int8 codes with one real scale; value ≈ codes · scale"""

    codes: NDArray[np.int8]
    scale: float

    def dequantize(self) -> Tensor:
        return self.codes.astype(np.float64) * self.scale


@dataclass(frozen=True)
class QuantizedAdapter:
    """int8 payloads for A, B and (DoRA) M / merged scale"""

    kind: str
    tensors: dict[str, QuantizedTensor]
    mode: str = "weight_norm"

    @property
    def rank(self) -> int:
        return int(self.tensors["a"].codes.shape[1])

    @property
    def num_params(self) -> int:
        return sum(int(q.codes.size) for name, q in self.tensors.items() if name != "merged_scale")


def quantize_tensor(t: Tensor) -> QuantizedTensor:
    """scale = max|t|/127 (1 for all-zero tensors), round half to even

    Raises:
        ParameterError: If ``t`` contains non-finite values
    """
    if not np.all(np.isfinite(t)):
        raise ParameterError("quantize_tensor: tensor must be finite")
    peak = float(np.max(np.abs(t))) if t.size else 0.0
    scale = peak / INT8_MAX if peak > 0 else 1.0
    codes = np.clip(np.rint(t / scale), -INT8_MAX, INT8_MAX).astype(np.int8)
    return QuantizedTensor(codes=codes, scale=scale)


def quantize_int8(ad: DoraAdapter | LoraAdapter) -> QuantizedAdapter:
    """Quantize every adapter tensor independently"""
    if isinstance(ad, LoraAdapter):
        return QuantizedAdapter(
            kind="lora", tensors={"a": quantize_tensor(ad.a), "b": quantize_tensor(ad.b)}
        )
    tensors = {
        "a": quantize_tensor(ad.a),
        "b": quantize_tensor(ad.b),
        "m": quantize_tensor(ad.m),
    }
    if ad.merged_scale is not None:
        tensors["merged_scale"] = quantize_tensor(ad.merged_scale)
    return QuantizedAdapter(kind="dora", tensors=tensors, mode=ad.mode)


def dequantize(q: QuantizedAdapter) -> DoraAdapter | LoraAdapter:
    """Rebuild a floating-point adapter from its int8 payloads"""
    a = q.tensors["a"].dequantize()
    b = q.tensors["b"].dequantize()
    if q.kind == "lora":
        return LoraAdapter(a=a, b=b)
    merged = q.tensors.get("merged_scale")
    return DoraAdapter(
        a=a,
        b=b,
        m=q.tensors["m"].dequantize(),
        mode=q.mode,
        merged_scale=None if merged is None else merged.dequantize(),
    )
