"""Closed-form gradients of adapter outputs with respect to A, B and M"""

from dataclasses import dataclass

import numpy as np

from rimc_calibration.adapters import DoraAdapter, LoraAdapter
from rimc_calibration.adapters.dora import activation_adapt, activation_norms, direction
from rimc_calibration.exceptions import AdapterStateError, DegenerateNormError, ShapeError
from rimc_calibration.linalg import Tensor


@dataclass(frozen=True)
class AdapterGradients:
    d_a: Tensor
    d_b: Tensor
    d_m: Tensor | None = None

    def as_dict(self) -> dict[str, Tensor]:
        grads = {"a": self.d_a, "b": self.d_b}
        if self.d_m is not None:
            grads["m"] = self.d_m
        return grads


def _normalized_backward(v: Tensor, norms: Tensor, m: Tensor, g: Tensor) -> tuple[Tensor, Tensor]:
    """Backward of U = V ∘ (M/‖V‖col) given dU = g

    Returns:
        tuple: (dV, dM) with dV_j = (M_j/‖V_j‖)(g_j − V_j (V_jᵀ g_j)/‖V_j‖²)
        and dM_j = V_jᵀ g_j / ‖V_j‖
    """
    proj = np.sum(v * g, axis=0, keepdims=True)
    d_m = proj / norms
    d_v = (m / norms) * (g - v * (proj / (norms * norms)))
    return d_v, d_m


def mse_loss(y: Tensor, target: Tensor) -> tuple[float, Tensor]:
    """Elementwise mean squared error and ∂loss/∂y"""
    diff = y - target
    return float(np.mean(diff * diff)), (2.0 / diff.size) * diff


def adapter_gradients(
    x: Tensor, w_r: Tensor, ad: DoraAdapter | LoraAdapter, g_out: Tensor
) -> AdapterGradients:
    """Gradients of the adapter output for the adapter's forward rule

    Args:
        x (Tensor): m×d layer input
        w_r (Tensor): d×k frozen weights
        ad (DoraAdapter | LoraAdapter): unmerged adapter
        g_out (Tensor): m×k gradient ∂loss/∂Y

    Returns:
        AdapterGradients: dA, dB and (DoRA) dM

    Raises:
        ShapeError: If g_out does not match the output shape
        AdapterStateError: If the adapter is merged
        DegenerateNormError: If a column norm is zero
    """
    if g_out.shape != (x.shape[0], w_r.shape[1]):
        raise ShapeError(f"adapter_gradients: g_out {g_out.shape} != {(x.shape[0], w_r.shape[1])}")

    if isinstance(ad, LoraAdapter):
        xa = x @ ad.a
        return AdapterGradients(d_a=x.T @ (g_out @ ad.b.T), d_b=xa.T @ g_out)

    if ad.merged:
        raise AdapterStateError("adapter_gradients: merged adapters are not trainable")

    if ad.mode == "weight_norm":
        # Y = x·U with U = V ∘ (M/‖V‖)
        v, norms = direction(w_r, ad)
        if np.any(norms == 0):
            raise DegenerateNormError("adapter_gradients: zero weight column norm")
        d_u = x.T @ g_out
        d_v, d_m = _normalized_backward(v, norms, ad.m, d_u)
        return AdapterGradients(d_a=d_v @ ad.b.T, d_b=ad.a.T @ d_v, d_m=d_m)

    # Y = M ∘ P/‖P‖ with P = x·W + (x·A)·B
    p = activation_adapt(x, w_r, ad)
    norms = activation_norms(p)
    d_p, d_m = _normalized_backward(p, norms, ad.m, g_out)
    xa = x @ ad.a
    return AdapterGradients(d_a=x.T @ (d_p @ ad.b.T), d_b=xa.T @ d_p, d_m=d_m)
