"""LoRA adapter: Y = XW + (XA)B"""

from dataclasses import dataclass

from rimc_calibration.adapters.base import (
    WeightSource,
    check_input,
    check_rank,
    init_low_rank,
    resolve_weights,
)
from rimc_calibration.linalg import RngStream, Tensor, as_stream


@dataclass
class LoraAdapter:
    """Low-rank pair A (d×r), B (r×k) added in parallel to a frozen weight"""

    a: Tensor
    b: Tensor

    @property
    def rank(self) -> int:
        return int(self.a.shape[1])

    @property
    def num_params(self) -> int:
        return int(self.a.size + self.b.size)

    def copy(self) -> "LoraAdapter":
        return LoraAdapter(a=self.a.copy(), b=self.b.copy())


def init_lora(w_r: WeightSource, r: int, seed: "int | RngStream") -> LoraAdapter:
    """Initialize a LoRA adapter for a d×k weight

    Raises:
        ParameterError: If r is outside [1, min(d, k)]
    """
    w = resolve_weights(w_r)
    d, k = w.shape
    check_rank(d, k, r)
    a, b = init_low_rank(d, k, r, as_stream(seed))
    return LoraAdapter(a=a, b=b)


def lora_forward(x: Tensor, w_r: WeightSource, ad: LoraAdapter) -> Tensor:
    """Y = x·W + (x·A)·B

    Raises:
        ShapeError: If shapes do not compose
    """
    w = resolve_weights(w_r)
    check_input(x, w, ad.a, ad.b)
    return x @ w + (x @ ad.a) @ ad.b
