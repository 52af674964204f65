"""Datasets: synthetic blobs, IDX and CSV ingestion, splits"""

import logging
import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from rimc_calibration.exceptions import DatasetError
from rimc_calibration.linalg import RngStream, Tensor

IDX_IMAGES_MAGIC = 2051  # 0x00000803
IDX_LABELS_MAGIC = 2049  # 0x00000801
SPLITS = ("train", "calib", "test", "all")


@dataclass(frozen=True)
class Dataset:
    """Inputs (n×…), integer labels and the split tag"""

    inputs: Tensor
    labels: NDArray[np.int64]
    num_classes: int
    split: str = "all"

    def __post_init__(self) -> None:
        if self.inputs.shape[0] != self.labels.shape[0]:
            raise DatasetError(
                f"Dataset: {self.inputs.shape[0]} inputs vs {self.labels.shape[0]} labels"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise DatasetError(f"Dataset: labels outside [0, {self.num_classes})")
        if self.split not in SPLITS:
            raise DatasetError(f"Dataset: unknown split '{self.split}'")

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def sample_shape(self) -> tuple[int, ...]:
        return tuple(self.inputs.shape[1:])

    def subset(self, indices: np.ndarray, split: str | None = None) -> "Dataset":
        return replace(
            self,
            inputs=self.inputs[indices],
            labels=self.labels[indices],
            split=split or self.split,
        )


def make_blobs(
    num_classes: int,
    dims: int,
    n: int,
    seed: int,
    separation: float = 3.0,
    image_shape: tuple[int, ...] | None = None,
    offset: float = 0.0,
) -> Dataset:
    """Gaussian class clusters around random centers

    Args:
        num_classes (int): number of clusters
        dims (int): feature dimensionality
        n (int): total sample count (classes balanced up to rounding)
        seed (int): RNG seed
        separation (float): std of the class centers; points have unit std
        image_shape (tuple | None): reshape each sample to (C, H, W)
        offset (float): added to every center coordinate, shifting all inputs off the origin

    Raises:
        DatasetError: If sizes are invalid
    """
    if num_classes < 2 or dims < 1 or n < 1:
        raise DatasetError(f"make_blobs: invalid sizes classes={num_classes} dims={dims} n={n}")
    if image_shape is not None and int(np.prod(image_shape)) != dims:
        raise DatasetError(f"make_blobs: image shape {image_shape} does not hold {dims} values")

    rng = RngStream(seed)
    centers = offset + rng.generator.normal(0.0, separation, size=(num_classes, dims))
    labels = np.arange(n, dtype=np.int64) % num_classes
    labels = labels[rng.permutation(n)]
    inputs = centers[labels] + rng.generator.normal(0.0, 1.0, size=(n, dims))
    if image_shape is not None:
        inputs = inputs.reshape((n, *image_shape))
    return Dataset(inputs=np.ascontiguousarray(inputs), labels=labels, num_classes=num_classes)


def split_dataset(ds: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Shuffle and split into (train, test)"""
    if not 0 < test_fraction < 1:
        raise DatasetError(f"split_dataset: test_fraction must be in (0, 1), got {test_fraction}")
    order = RngStream(seed).permutation(len(ds))
    n_test = max(1, int(round(len(ds) * test_fraction)))
    return ds.subset(order[n_test:], "train"), ds.subset(order[:n_test], "test")


def sample_calibration_set(train: Dataset, n: int, rng: RngStream) -> Dataset:
    """Draw ``n`` calibration samples from the training split (never from test)

    Raises:
        DatasetError: If ``train`` is not a training split or is too small
    """
    if train.split not in ("train", "all"):
        raise DatasetError(f"calibration samples must come from train, got '{train.split}'")
    if not 1 <= n <= len(train):
        raise DatasetError(f"cannot draw {n} calibration samples from {len(train)}")
    indices = np.sort(rng.permutation(len(train))[:n])
    return train.subset(indices, "calib")


def _read_idx(path: Path, expected_magic: int) -> NDArray[np.uint8]:
    """Read an IDX ubyte file (big-endian header)"""
    data = path.read_bytes()
    if len(data) < 8:
        raise DatasetError(f"{path}: truncated IDX header")
    (magic,) = struct.unpack(">I", data[:4])
    if magic != expected_magic:
        raise DatasetError(f"{path}: IDX magic {magic} != {expected_magic}")
    ndim = magic & 0xFF
    header = 4 + 4 * ndim
    if len(data) < header:
        raise DatasetError(f"{path}: IDX header declares {ndim} dims but the file has {len(data)} bytes")
    dims = struct.unpack(f">{ndim}I", data[4:header])
    payload = np.frombuffer(data, dtype=np.uint8, offset=header)
    if payload.size != int(np.prod(dims)):
        raise DatasetError(f"{path}: payload has {payload.size} bytes, header says {dims}")
    return payload.reshape(dims)


def read_idx_dataset(images_path: str | Path, labels_path: str | Path, num_classes: int = 10) -> Dataset:
    """Load an IDX image/label pair; pixels scaled to [0, 1] as n×1×H×W"""
    images = _read_idx(Path(images_path), IDX_IMAGES_MAGIC)
    labels = _read_idx(Path(labels_path), IDX_LABELS_MAGIC).astype(np.int64)
    logging.info(f"read_idx_dataset: loaded {images.shape[0]} images of {images.shape[1:]}")
    inputs = images.astype(np.float64)[:, None, :, :] / 255.0
    return Dataset(inputs=inputs, labels=labels, num_classes=num_classes)


def read_csv_dataset(
    path: str | Path, num_classes: int, image_shape: tuple[int, ...] | None = None
) -> Dataset:
    """Load rows of ``label,value,value,...``"""
    table = np.loadtxt(Path(path), delimiter=",", ndmin=2)
    if table.shape[1] < 2:
        raise DatasetError(f"{path}: expected a label column and at least one value")
    labels = table[:, 0].astype(np.int64)
    inputs = np.ascontiguousarray(table[:, 1:])
    if image_shape is not None:
        inputs = inputs.reshape((inputs.shape[0], *image_shape))
    return Dataset(inputs=inputs, labels=labels, num_classes=num_classes)


def write_csv_dataset(ds: Dataset, path: str | Path) -> None:
    """Write ``label,value,...`` rows (flattened samples)"""
    flat = ds.inputs.reshape(len(ds), -1)
    table = np.column_stack([ds.labels.astype(np.float64), flat])
    np.savetxt(Path(path), table, delimiter=",", fmt="%.17g")
