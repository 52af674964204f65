"""Teacher feature cache"""

from dataclasses import dataclass

import numpy as np

from rimc_calibration.exceptions import DatasetError
from rimc_calibration.linalg import Tensor
from rimc_calibration.nn import Network, forward


@dataclass(frozen=True)
class LayerFeatures:
    """Teacher input X_l and pre-bias feature F_teacher^l of one weighted layer"""

    layer_index: int
    inputs: Tensor
    features: Tensor
    rows_per_sample: int

    @property
    def num_samples(self) -> int:
        return self.inputs.shape[0] // self.rows_per_sample

    def sample_rows(self, samples: np.ndarray) -> np.ndarray:
        """Row indices belonging to the given sample indices"""
        base = samples[:, None] * self.rows_per_sample
        return (base + np.arange(self.rows_per_sample)[None, :]).reshape(-1)


@dataclass(frozen=True)
class FeatureCache:
    """Per weighted layer teacher inputs and features (read-only arrays)"""

    layers: tuple[LayerFeatures, ...]

    def for_layer(self, layer_index: int) -> LayerFeatures:
        for entry in self.layers:
            if entry.layer_index == layer_index:
                return entry
        raise KeyError(f"no cached features for layer {layer_index}")


def _frozen(array: Tensor) -> Tensor:
    out = np.array(array, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


def extract_teacher_features(teacher: Network, calib_inputs: Tensor) -> FeatureCache:
    """One capturing forward pass of the teacher over the calibration inputs

    Raises:
        DatasetError: If no calibration inputs are given
    """
    if calib_inputs.shape[0] == 0:
        raise DatasetError("extract_teacher_features: calibration set is empty")
    captures = forward(teacher, calib_inputs, capture=True).captures or []
    return FeatureCache(
        layers=tuple(
            LayerFeatures(
                layer_index=c.layer_index,
                inputs=_frozen(c.inputs),
                features=_frozen(c.features),
                rows_per_sample=c.rows_per_sample,
            )
            for c in captures
        )
    )
