"""LoRA and DoRA adapters"""

from typing import TypeAlias

from rimc_calibration.adapters.base import WeightSource, resolve_weights
from rimc_calibration.adapters.dora import (
    DoraAdapter,
    dora_forward,
    init_dora,
    merge_for_inference,
)
from rimc_calibration.adapters.lora import LoraAdapter, init_lora, lora_forward
from rimc_calibration.adapters.quantize import (
    QuantizedAdapter,
    QuantizedTensor,
    dequantize,
    quantize_int8,
    quantize_tensor,
)
from rimc_calibration.adapters.ratio import network_parameter_ratio, parameter_ratio
from rimc_calibration.linalg import Tensor

Adapter: TypeAlias = DoraAdapter | LoraAdapter | QuantizedAdapter


def adapter_forward(x: Tensor, w_r: WeightSource, ad: Adapter) -> Tensor:
    """Dispatch to the forward rule of the adapter kind (int8 adapters are dequantized)"""
    if isinstance(ad, QuantizedAdapter):
        ad = dequantize(ad)
    if isinstance(ad, LoraAdapter):
        return lora_forward(x, w_r, ad)
    return dora_forward(x, w_r, ad)


def quantization_forward_error(x: Tensor, w_r: WeightSource, ad: DoraAdapter | LoraAdapter) -> float:
    """Max |int8 forward − FP forward| over a batch"""
    exact = adapter_forward(x, w_r, ad)
    approx = adapter_forward(x, w_r, quantize_int8(ad))
    return float(abs(exact - approx).max()) if exact.size else 0.0


__all__ = [
    "Adapter",
    "DoraAdapter",
    "LoraAdapter",
    "QuantizedAdapter",
    "QuantizedTensor",
    "WeightSource",
    "adapter_forward",
    "dequantize",
    "dora_forward",
    "init_dora",
    "init_lora",
    "lora_forward",
    "merge_for_inference",
    "network_parameter_ratio",
    "parameter_ratio",
    "quantization_forward_error",
    "quantize_int8",
    "quantize_tensor",
    "resolve_weights",
]
