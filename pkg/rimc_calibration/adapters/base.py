"""Shared helpers for adapter math"""

import numpy as np

from rimc_calibration.exceptions import ParameterError, ShapeError
from rimc_calibration.linalg import RngStream, Tensor, gaussian
from rimc_calibration.rram import Crossbar, read_effective_weights

WeightSource = Tensor | Crossbar


def resolve_weights(source: WeightSource) -> Tensor:
    """Read the d×k weight matrix from a tensor or a crossbar (pure read)"""
    if isinstance(source, Crossbar):
        return read_effective_weights(source)
    return source


def check_rank(d: int, k: int, r: int) -> None:
    """Raises ParameterError unless 1 <= r <= min(d, k)"""
    if not 1 <= r <= min(d, k):
        raise ParameterError(f"rank {r} outside [1, {min(d, k)}] for a {d}x{k} layer")


def init_low_rank(d: int, k: int, r: int, rng: RngStream) -> tuple[Tensor, Tensor]:
    """A ~ N(0, 1/d), B = 0"""
    a = gaussian(rng, 0.0, 1.0 / np.sqrt(d), (d, r))
    b = np.zeros((r, k), dtype=np.float64)
    return a, b


def check_input(x: Tensor, w: Tensor, a: Tensor, b: Tensor) -> None:
    """Raises ShapeError unless x·W and (x·A)·B compose"""
    if x.ndim != 2 or x.shape[1] != w.shape[0]:
        raise ShapeError(f"adapter input {x.shape} does not match weights {w.shape}")
    if a.shape != (w.shape[0], b.shape[0]) or b.shape[1] != w.shape[1]:
        raise ShapeError(
            f"adapter factors A{a.shape}, B{b.shape} do not match weights {w.shape}"
        )
