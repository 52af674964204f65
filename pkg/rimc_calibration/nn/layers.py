"""Layer descriptions shared by teacher and student networks"""

import copy
from dataclasses import dataclass, field
from typing import ClassVar, TypeAlias

import numpy as np

from rimc_calibration.adapters import Adapter
from rimc_calibration.config import BN_EPS
from rimc_calibration.exceptions import ShapeError
from rimc_calibration.linalg import Tensor
from rimc_calibration.rram import Crossbar, read_effective_weights


@dataclass
class WeightedLayer:
    """A layer whose weight matrix is backed by a tensor (teacher) or a crossbar (student)

    The weight is stored in matrix form d×k; conv kernels are unrolled to
    (C_in·kh·kw)×C_out following the im2col column order.
    """

    weight: Tensor | None = None
    bias: Tensor | None = None
    crossbar: Crossbar | None = None
    adapter: Adapter | None = None

    kind: ClassVar[str] = "weighted"

    @property
    def d(self) -> int:
        raise NotImplementedError

    @property
    def k(self) -> int:
        raise NotImplementedError

    def weight_matrix(self) -> Tensor:
        """Effective d×k weights: the tensor, or the crossbar read-back"""
        if self.crossbar is not None:
            return read_effective_weights(self.crossbar)
        assert self.weight is not None
        return self.weight

    def validate(self, index: int) -> None:
        """Check backing and shapes

        Raises:
            ShapeError: If the layer has zero or two backings or inconsistent shapes
        """
        if (self.weight is None) == (self.crossbar is None):
            raise ShapeError(f"layer {index}: exactly one of weight/crossbar must be set")
        shape = self.weight.shape if self.weight is not None else self.crossbar.shape  # type: ignore[union-attr]
        if tuple(shape) != (self.d, self.k):
            raise ShapeError(f"layer {index}: weight shape {shape} != ({self.d}, {self.k})")
        if self.bias is not None and self.bias.shape != (self.k,):
            raise ShapeError(f"layer {index}: bias shape {self.bias.shape} != ({self.k},)")

    def project(self, x: Tensor) -> Tensor:
        """Matrix-form product x·W (through the adapter when attached), without bias"""
        from rimc_calibration.adapters import adapter_forward

        w = self.weight_matrix()
        if self.adapter is not None:
            return adapter_forward(x, w, self.adapter)
        if x.shape[1] != w.shape[0]:
            raise ShapeError(f"{self.kind}: input width {x.shape[1]} != {w.shape[0]}")
        return x @ w

    def add_bias(self, y: Tensor) -> Tensor:
        return y + self.bias if self.bias is not None else y


@dataclass
class Dense(WeightedLayer):
    """Fully connected layer y = x·W + b"""

    in_features: int = 0
    out_features: int = 0

    kind: ClassVar[str] = "dense"

    @property
    def d(self) -> int:
        return self.in_features

    @property
    def k(self) -> int:
        return self.out_features


@dataclass
class Conv2d(WeightedLayer):
    """2-D convolution realized as im2col + matmul"""

    c_in: int = 0
    c_out: int = 0
    kh: int = 3
    kw: int = 3
    stride: int = 1
    pad: int = 0

    kind: ClassVar[str] = "conv2d"

    @property
    def d(self) -> int:
        return self.c_in * self.kh * self.kw

    @property
    def k(self) -> int:
        return self.c_out


@dataclass
class BatchNormFrozen:
    """Per-channel affine normalization with stored statistics"""

    scale: Tensor
    shift: Tensor
    mean: Tensor
    var: Tensor
    eps: float = BN_EPS

    kind: ClassVar[str] = "batchnorm"

    @property
    def channels(self) -> int:
        return int(self.scale.shape[0])

    def validate(self, index: int) -> None:
        shapes = {a.shape for a in (self.scale, self.shift, self.mean, self.var)}
        if len(shapes) != 1:
            raise ShapeError(f"layer {index}: batchnorm parameter shapes differ: {shapes}")
        if not np.all(self.var > 0):
            raise ShapeError(f"layer {index}: batchnorm variances must be > 0")

    @classmethod
    def identity(cls, channels: int) -> "BatchNormFrozen":
        return cls(
            scale=np.ones(channels),
            shift=np.zeros(channels),
            mean=np.zeros(channels),
            var=np.ones(channels),
        )


@dataclass
class ReLU:
    kind: ClassVar[str] = "relu"

    def validate(self, index: int) -> None:
        return None


@dataclass
class MaxPool:
    """Non-overlapping max pooling (stride = window)"""

    h: int = 2
    w: int = 2

    kind: ClassVar[str] = "maxpool"

    def validate(self, index: int) -> None:
        if self.h < 1 or self.w < 1:
            raise ShapeError(f"layer {index}: pool window must be positive")


@dataclass
class AvgPool:
    """Non-overlapping average pooling (stride = window)"""

    h: int = 2
    w: int = 2

    kind: ClassVar[str] = "avgpool"

    def validate(self, index: int) -> None:
        if self.h < 1 or self.w < 1:
            raise ShapeError(f"layer {index}: pool window must be positive")


@dataclass
class Flatten:
    kind: ClassVar[str] = "flatten"

    def validate(self, index: int) -> None:
        return None


LayerSpec: TypeAlias = Dense | Conv2d | BatchNormFrozen | ReLU | MaxPool | AvgPool | Flatten


@dataclass
class Network:
    """Ordered feed-forward layer stack"""

    layers: list[LayerSpec] = field(default_factory=list)
    input_shape: tuple[int, ...] = ()
    num_classes: int = 0
    metadata: dict = field(default_factory=dict)

    def weighted_layers(self) -> list[tuple[int, WeightedLayer]]:
        """(index, layer) for every Dense/Conv2d layer"""
        return [(i, layer) for i, layer in enumerate(self.layers) if isinstance(layer, WeightedLayer)]

    def validate(self) -> None:
        for i, layer in enumerate(self.layers):
            layer.validate(i)

    def copy(self) -> "Network":
        """Deep copy of every tensor, crossbar and adapter"""
        return copy.deepcopy(self)

    def strip_adapters(self) -> "Network":
        """Copy with every adapter removed"""
        clone = self.copy()
        for _, layer in clone.weighted_layers():
            layer.adapter = None
        return clone

    def crossbars(self) -> list[tuple[int, Crossbar]]:
        return [(i, layer.crossbar) for i, layer in self.weighted_layers() if layer.crossbar is not None]
