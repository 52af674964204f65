"""DoRA adapter: LoRA plus a per-output-channel magnitude vector M

Two normalizations are supported:

* ``weight_norm`` (default): V = W + A·B, Y = x·(V ∘ M/‖V‖col). Identity at init.
* ``activation_norm``: Adapt = x·W + (x·A)·B, Y = M ∘ Adapt/‖Adapt‖col with norms
  taken over the batch.

After ``merge_for_inference`` the pair M/‖·‖ is folded into ``merged_scale`` and the
forward pass becomes Y = (x·W + (x·A)·B) ∘ merged_scale.
"""

from dataclasses import dataclass, replace

import numpy as np

from rimc_calibration.adapters.base import (
    WeightSource,
    check_input,
    check_rank,
    init_low_rank,
    resolve_weights,
)
from rimc_calibration.config import DORA_MODES
from rimc_calibration.exceptions import (
    AdapterStateError,
    DegenerateNormError,
    ParameterError,
    ShapeError,
)
from rimc_calibration.linalg import RngStream, Tensor, as_stream, column_l2_norms


@dataclass
class DoraAdapter:
    """A (d×r), B (r×k), magnitude M (1×k) and the normalization mode"""

    a: Tensor
    b: Tensor
    m: Tensor
    mode: str = "weight_norm"
    merged_scale: Tensor | None = None

    def __post_init__(self) -> None:
        if self.mode not in DORA_MODES:
            raise ParameterError(f"DoraAdapter: unknown mode '{self.mode}'")
        if self.m.shape != (1, self.b.shape[1]):
            raise ShapeError(f"DoraAdapter: M shape {self.m.shape} != (1, {self.b.shape[1]})")

    @property
    def rank(self) -> int:
        return int(self.a.shape[1])

    @property
    def merged(self) -> bool:
        return self.merged_scale is not None

    @property
    def num_params(self) -> int:
        return int(self.a.size + self.b.size + self.m.size)

    def copy(self) -> "DoraAdapter":
        return DoraAdapter(
            a=self.a.copy(),
            b=self.b.copy(),
            m=self.m.copy(),
            mode=self.mode,
            merged_scale=None if self.merged_scale is None else self.merged_scale.copy(),
        )


def init_dora(
    w_r: WeightSource,
    r: int,
    seed: "int | RngStream",
    mode: str = "weight_norm",
    calib_x: Tensor | None = None,
) -> DoraAdapter:
    """Initialize A ~ N(0, 1/d), B = 0, M = column norms of W

    In activation_norm mode with a calibration batch, M is the column norms of
    ``calib_x`` · W instead, so the adapter reproduces x · W on that batch.

    Raises:
        ParameterError: If r is outside [1, min(d, k)] or the mode is unknown
        DegenerateNormError: If a column of ``calib_x`` · W is all zero
    """
    w = resolve_weights(w_r)
    d, k = w.shape
    check_rank(d, k, r)
    a, b = init_low_rank(d, k, r, as_stream(seed))
    if mode == "activation_norm" and calib_x is not None:
        check_input(calib_x, w, a, b)
        m = activation_norms(calib_x @ w)
    else:
        m = column_l2_norms(w)
    return DoraAdapter(a=a, b=b, m=m, mode=mode)


def direction(w: Tensor, ad: DoraAdapter) -> tuple[Tensor, Tensor]:
    """V = W + A·B and its column norms"""
    v = w + ad.a @ ad.b
    return v, column_l2_norms(v)


def safe_ratio(m: Tensor, norms: Tensor) -> Tensor:
    """M / ‖·‖ with 0 where the norm vanishes"""
    out = np.zeros_like(norms)
    np.divide(m, norms, out=out, where=norms > 0)
    return out


def activation_adapt(x: Tensor, w: Tensor, ad: DoraAdapter) -> Tensor:
    """Adapt = x·W + (x·A)·B"""
    return x @ w + (x @ ad.a) @ ad.b


def activation_norms(adapt: Tensor) -> Tensor:
    """Column norms of Adapt over the batch

    Raises:
        DegenerateNormError: If any column norm is zero
    """
    norms = column_l2_norms(adapt)
    if np.any(norms == 0):
        zero = np.flatnonzero(norms[0] == 0).tolist()
        raise DegenerateNormError(
            f"activation norm is zero for output columns {zero} (batch size {adapt.shape[0]})"
        )
    return norms


def dora_forward(x: Tensor, w_r: WeightSource, ad: DoraAdapter) -> Tensor:
    """DoRA forward pass for the adapter's mode (or its merged scale)

    Raises:
        ShapeError: If shapes do not compose
        DegenerateNormError: If activation_norm hits a zero column norm
    """
    w = resolve_weights(w_r)
    check_input(x, w, ad.a, ad.b)

    if ad.merged_scale is not None:
        return activation_adapt(x, w, ad) * ad.merged_scale

    if ad.mode == "weight_norm":
        v, norms = direction(w, ad)
        return x @ (v * safe_ratio(ad.m, norms))

    adapt = activation_adapt(x, w, ad)
    return ad.m * (adapt / activation_norms(adapt))


def merge_for_inference(
    ad: DoraAdapter, w_r: WeightSource, calib_x: Tensor | None = None
) -> DoraAdapter:
    """Fold M and the normalization into one per-channel scale

    Args:
        ad (DoraAdapter): unmerged adapter
        w_r (WeightSource): the frozen weights
        calib_x (Tensor | None): calibration batch, required in activation_norm mode

    Returns:
        DoraAdapter: merged copy

    Raises:
        AdapterStateError: If already merged or calib_x is missing in activation_norm mode
        DegenerateNormError: If a column norm is zero
    """
    if ad.merged:
        raise AdapterStateError("merge_for_inference: adapter is already merged")
    w = resolve_weights(w_r)

    if ad.mode == "weight_norm":
        _, norms = direction(w, ad)
        if np.any(norms == 0):
            raise DegenerateNormError("merge_for_inference: zero weight column norm")
        scale = ad.m / norms
    else:
        if calib_x is None:
            raise AdapterStateError(
                "merge_for_inference: activation_norm mode needs the calibration batch"
            )
        check_input(calib_x, w, ad.a, ad.b)
        scale = ad.m / activation_norms(activation_adapt(calib_x, w, ad))

    return replace(ad.copy(), merged_scale=scale)
