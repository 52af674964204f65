"""Tests for nn/training.py"""

from unittest.mock import patch

import numpy as np
import pytest

from rimc_calibration.exceptions import DatasetError, TrainingError
from rimc_calibration.linalg import RngStream
from rimc_calibration.nn import TrainHyper, build_preset, evaluate, make_blobs, train_teacher


class TestTrainTeacher:
    """Test cases for train_teacher"""

    def setup_method(self):
        """Set up test fixtures"""
        self.train = make_blobs(3, 6, 90, seed=4).subset(np.arange(90), "train")
        self.net = build_preset("mlp", (6,), 3, RngStream(1))

    def test_zero_epochs_returns_copy(self):
        """Test epochs = 0 returns the unchanged network"""
        trained = train_teacher(self.net, self.train, TrainHyper(epochs=0))
        assert trained is not self.net
        for (_, a), (_, b) in zip(trained.weighted_layers(), self.net.weighted_layers()):
            assert np.array_equal(a.weight, b.weight)

    def test_input_not_mutated(self):
        """Test training leaves the input network untouched"""
        before = self.net.layers[0].weight.copy()
        train_teacher(self.net, self.train, TrainHyper(epochs=1, batch=16))
        assert np.array_equal(self.net.layers[0].weight, before)

    def test_deterministic(self):
        """Test identical seeds give identical weights"""
        hyper = TrainHyper(epochs=2, batch=16, seed=3)
        a = train_teacher(self.net, self.train, hyper)
        b = train_teacher(self.net, self.train, hyper)
        assert np.array_equal(a.layers[-1].weight, b.layers[-1].weight)

    def test_records_losses(self):
        """Test metadata records one loss per epoch and train accuracy"""
        trained = train_teacher(self.net, self.train, TrainHyper(epochs=3, batch=16))
        assert len(trained.metadata["epoch_losses"]) == 3
        assert 0.0 <= trained.metadata["train_accuracy"] <= 1.0

    def test_empty_dataset(self):
        """Test an empty training set raises DatasetError"""
        with pytest.raises(DatasetError):
            train_teacher(self.net, self.train.subset(np.arange(0), "train"), TrainHyper())

    def test_divergence(self):
        """Test a non-finite loss raises TrainingError"""
        with patch(
            "rimc_calibration.nn.training.softmax_cross_entropy",
            return_value=(float("nan"), np.zeros((16, 3))),
        ):
            with pytest.raises(TrainingError, match="epoch 0"):
                train_teacher(self.net, self.train, TrainHyper(epochs=2, batch=16))


class TestEvaluate:
    """Test cases for evaluate"""

    def test_teacher_accuracy(self, trained_teacher, blob_splits):
        """Test the trained fixture separates the blobs"""
        _, test = blob_splits
        assert evaluate(trained_teacher, test) >= 0.9

    def test_empty(self, trained_teacher, blob_splits):
        """Test an empty set raises DatasetError"""
        _, test = blob_splits
        with pytest.raises(DatasetError):
            evaluate(trained_teacher, test.subset(np.arange(0)))
