"""Adapter parameter overhead"""

from fractions import Fraction
from typing import TYPE_CHECKING

from rimc_calibration.exceptions import ParameterError

if TYPE_CHECKING:
    from rimc_calibration.nn import Network


def parameter_ratio(d: int, k: int, r: int, kind: str = "dora") -> Fraction:
    """γ = (d·r + r·k + k)/(d·k) for DoRA, (d·r + r·k)/(d·k) for LoRA, exactly

    Raises:
        ParameterError: If any dimension is not positive
    """
    if min(d, k, r) < 1:
        raise ParameterError(f"parameter_ratio: dimensions must be positive, got {(d, k, r)}")
    new_params = d * r + r * k + (k if kind == "dora" else 0)
    return Fraction(new_params, d * k)


def network_parameter_ratio(net: "Network") -> Fraction:
    """Σ adapter parameters / Σ original weight parameters over every weighted layer

    Args:
        net (Network): network whose weighted layers all carry an adapter

    Raises:
        ParameterError: If a weighted layer has no adapter or the network has none
    """
    adapter_params = 0
    weight_params = 0
    for index, layer in net.weighted_layers():
        if layer.adapter is None:
            raise ParameterError(f"network_parameter_ratio: layer {index} has no adapter")
        adapter_params += layer.adapter.num_params
        weight_params += layer.d * layer.k
    if weight_params == 0:
        raise ParameterError("network_parameter_ratio: network has no weighted layers")
    return Fraction(adapter_params, weight_params)
