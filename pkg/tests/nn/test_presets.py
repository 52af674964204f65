"""Tests for nn/presets.py"""

import numpy as np
import pytest

from rimc_calibration.exceptions import ParameterError
from rimc_calibration.linalg import RngStream
from rimc_calibration.nn import Conv2d, Dense, Flatten, build_preset, forward


class TestBuildPreset:
    """Test cases for build_preset"""

    def test_mlp_layout(self):
        """Test the MLP has three dense layers 16 -> 128 -> 64 -> 4"""
        net = build_preset("mlp", (16,), 4, RngStream(0))
        shapes = [(layer.d, layer.k) for _, layer in net.weighted_layers()]
        assert shapes == [(16, 128), (128, 64), (64, 4)]
        assert net.metadata["preset"] == "mlp"

    def test_mlp_flattens_images(self):
        """Test image inputs get a leading Flatten"""
        net = build_preset("mlp", (1, 4, 4), 2, RngStream(0))
        assert isinstance(net.layers[0], Flatten)
        assert forward(net, np.zeros((3, 1, 4, 4))).logits.shape == (3, 2)

    def test_cnn_layout(self):
        """Test the CNN has two conv stages and a dense head"""
        net = build_preset("cnn", (1, 8, 8), 10, RngStream(0))
        kinds = [type(layer) for _, layer in net.weighted_layers()]
        assert kinds == [Conv2d, Conv2d, Dense]
        assert net.weighted_layers()[-1][1].d == 16 * 2 * 2
        assert forward(net, np.zeros((2, 1, 8, 8))).logits.shape == (2, 10)

    def test_deterministic(self):
        """Test the same stream gives the same weights"""
        a = build_preset("mlp", (8,), 3, RngStream(5))
        b = build_preset("mlp", (8,), 3, RngStream(5))
        assert np.array_equal(a.layers[0].weight, b.layers[0].weight)

    def test_unknown(self):
        """Test an unknown preset raises ParameterError"""
        with pytest.raises(ParameterError):
            build_preset("resnet", (8,), 3, RngStream(0))

    def test_cnn_needs_images(self):
        """Test the CNN rejects flat samples"""
        with pytest.raises(ParameterError):
            build_preset("cnn", (16,), 3, RngStream(0))

    def test_cnn_too_small(self):
        """Test inputs too small for two pools raise ParameterError"""
        with pytest.raises(ParameterError):
            build_preset("cnn", (1, 2, 2), 3, RngStream(0))
