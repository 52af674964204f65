"""Feed-forward networks, datasets, training, deployment and model files"""

from rimc_calibration.nn.datasets import (
    Dataset,
    make_blobs,
    read_csv_dataset,
    read_idx_dataset,
    sample_calibration_set,
    split_dataset,
    write_csv_dataset,
)
from rimc_calibration.nn.deploy import deploy_to_rimc
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
from rimc_calibration.nn.network import ForwardResult, LayerCapture, forward
from rimc_calibration.nn.presets import build_preset
from rimc_calibration.nn.serialization import load_model, save_model
from rimc_calibration.nn.training import TrainHyper, evaluate, train_teacher

__all__ = [
    "AvgPool",
    "BatchNormFrozen",
    "Conv2d",
    "Dataset",
    "Dense",
    "Flatten",
    "ForwardResult",
    "LayerCapture",
    "LayerSpec",
    "MaxPool",
    "Network",
    "ReLU",
    "TrainHyper",
    "WeightedLayer",
    "build_preset",
    "deploy_to_rimc",
    "evaluate",
    "forward",
    "load_model",
    "make_blobs",
    "read_csv_dataset",
    "read_idx_dataset",
    "sample_calibration_set",
    "save_model",
    "split_dataset",
    "train_teacher",
    "write_csv_dataset",
]
