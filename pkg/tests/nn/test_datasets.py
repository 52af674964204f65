"""Tests for nn/datasets.py"""

import struct

import numpy as np
import pytest

from rimc_calibration.exceptions import DatasetError
from rimc_calibration.linalg import RngStream
from rimc_calibration.nn import (
    Dataset,
    make_blobs,
    read_csv_dataset,
    read_idx_dataset,
    sample_calibration_set,
    split_dataset,
    write_csv_dataset,
)


def _write_idx(path, magic, dims, payload):
    header = struct.pack(">I", magic) + struct.pack(f">{len(dims)}I", *dims)
    path.write_bytes(header + bytes(payload))


class TestMakeBlobs:
    """Test cases for make_blobs"""

    def test_shapes_and_balance(self):
        """Test sizes and per-class counts"""
        ds = make_blobs(3, 5, 30, seed=1)
        assert ds.inputs.shape == (30, 5)
        assert np.bincount(ds.labels).tolist() == [10, 10, 10]

    def test_deterministic(self):
        """Test the same seed gives the same data"""
        a, b = make_blobs(3, 5, 30, seed=1), make_blobs(3, 5, 30, seed=1)
        assert np.array_equal(a.inputs, b.inputs)
        assert np.array_equal(a.labels, b.labels)

    def test_image_shape(self):
        """Test samples reshape to (C, H, W)"""
        assert make_blobs(2, 16, 4, seed=0, image_shape=(1, 4, 4)).sample_shape == (1, 4, 4)

    def test_bad_image_shape(self):
        """Test a mismatched image shape raises DatasetError"""
        with pytest.raises(DatasetError):
            make_blobs(2, 15, 4, seed=0, image_shape=(1, 4, 4))

    def test_offset_shifts_inputs(self):
        """Test offset moves every sample by the same constant"""
        base = make_blobs(3, 5, 30, seed=1)
        shifted = make_blobs(3, 5, 30, seed=1, offset=4.0)
        assert np.allclose(shifted.inputs - base.inputs, 4.0)
        assert np.array_equal(shifted.labels, base.labels)

    def test_single_class(self):
        """Test fewer than two classes raises DatasetError"""
        with pytest.raises(DatasetError):
            make_blobs(1, 5, 10, seed=0)


class TestSplits:
    """Test cases for split_dataset and sample_calibration_set"""

    def setup_method(self):
        """Set up test fixtures"""
        self.ds = make_blobs(4, 3, 100, seed=2)

    def test_split_sizes_disjoint(self):
        """Test splits partition the data"""
        train, test = split_dataset(self.ds, 0.2, seed=0)
        assert (len(train), len(test)) == (80, 20)
        assert train.split == "train" and test.split == "test"
        rows = {tuple(r) for r in train.inputs} & {tuple(r) for r in test.inputs}
        assert not rows

    @pytest.mark.parametrize("fraction", [0.0, 1.0])
    def test_bad_fraction(self, fraction):
        """Test fractions outside (0, 1) raise DatasetError"""
        with pytest.raises(DatasetError):
            split_dataset(self.ds, fraction, seed=0)

    def test_calibration_from_train(self):
        """Test calibration samples come from train and are reproducible"""
        train, _ = split_dataset(self.ds, 0.2, seed=0)
        a = sample_calibration_set(train, 10, RngStream(5))
        b = sample_calibration_set(train, 10, RngStream(5))
        assert len(a) == 10 and a.split == "calib"
        assert np.array_equal(a.inputs, b.inputs)

    def test_calibration_from_test_rejected(self):
        """Test drawing from the test split raises DatasetError"""
        _, test = split_dataset(self.ds, 0.2, seed=0)
        with pytest.raises(DatasetError):
            sample_calibration_set(test, 5, RngStream(0))

    def test_calibration_too_many(self):
        """Test asking for more samples than available raises DatasetError"""
        train, _ = split_dataset(self.ds, 0.2, seed=0)
        with pytest.raises(DatasetError):
            sample_calibration_set(train, 81, RngStream(0))

    def test_label_out_of_range(self):
        """Test labels >= num_classes raise DatasetError"""
        with pytest.raises(DatasetError):
            Dataset(inputs=np.zeros((2, 1)), labels=np.array([0, 2]), num_classes=2)


class TestFiles:
    """Test cases for IDX and CSV ingestion"""

    def test_idx(self, tmp_path):
        """Test an IDX pair loads as n×1×H×W in [0, 1]"""
        images, labels = tmp_path / "images.idx", tmp_path / "labels.idx"
        _write_idx(images, 2051, (2, 2, 2), [0, 255, 51, 102, 0, 0, 0, 255])
        _write_idx(labels, 2049, (2,), [3, 7])
        ds = read_idx_dataset(images, labels)
        assert ds.inputs.shape == (2, 1, 2, 2)
        assert ds.inputs[0, 0].tolist() == [[0.0, 1.0], [0.2, 0.4]]
        assert ds.labels.tolist() == [3, 7]

    def test_idx_bad_magic(self, tmp_path):
        """Test a wrong magic number raises DatasetError"""
        images, labels = tmp_path / "images.idx", tmp_path / "labels.idx"
        _write_idx(images, 2049, (2,), [0, 1])
        _write_idx(labels, 2049, (2,), [0, 1])
        with pytest.raises(DatasetError, match="magic"):
            read_idx_dataset(images, labels)

    def test_idx_short_payload(self, tmp_path):
        """Test a payload shorter than the header says raises DatasetError"""
        images, labels = tmp_path / "images.idx", tmp_path / "labels.idx"
        _write_idx(images, 2051, (2, 2, 2), [0] * 7)
        _write_idx(labels, 2049, (2,), [0, 1])
        with pytest.raises(DatasetError):
            read_idx_dataset(images, labels)

    def test_idx_truncated_dims(self, tmp_path):
        """Test a header cut off inside the dimension list raises DatasetError"""
        images, labels = tmp_path / "images.idx", tmp_path / "labels.idx"
        images.write_bytes(struct.pack(">3I", 2051, 2, 2))
        _write_idx(labels, 2049, (2,), [0, 1])
        with pytest.raises(DatasetError, match="declares 3 dims"):
            read_idx_dataset(images, labels)

    def test_csv_round_trip(self, tmp_path):
        """Test write_csv_dataset then read_csv_dataset preserves data"""
        ds = make_blobs(3, 4, 12, seed=9)
        path = tmp_path / "blobs.csv"
        write_csv_dataset(ds, path)
        back = read_csv_dataset(path, 3)
        assert np.array_equal(back.inputs, ds.inputs)
        assert np.array_equal(back.labels, ds.labels)

    def test_csv_label_only(self, tmp_path):
        """Test rows without values raise DatasetError"""
        path = tmp_path / "bad.csv"
        path.write_text("1\n0\n")
        with pytest.raises(DatasetError):
            read_csv_dataset(path, 2)
