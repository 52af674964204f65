"""Tests for adapters/ratio.py"""

from fractions import Fraction

import numpy as np
import pytest

from rimc_calibration.adapters import init_dora, network_parameter_ratio, parameter_ratio
from rimc_calibration.exceptions import ParameterError
from rimc_calibration.nn import Dense, Network


def _network(*shapes, rank=1):
    layers = []
    for d, k in shapes:
        layer = Dense(weight=np.ones((d, k)), in_features=d, out_features=k)
        layer.adapter = init_dora(layer.weight, rank, 0)
        layers.append(layer)
    return Network(layers=layers, input_shape=(shapes[0][0],), num_classes=shapes[-1][1])


class TestParameterRatio:
    """Test cases for parameter_ratio"""

    @pytest.mark.parametrize(
        "d,k,r,expected",
        [
            (16, 16, 1, Fraction(48, 256)),
            (64, 64, 2, Fraction(320, 4096)),
            (10, 5, 1, Fraction(20, 50)),
            (8, 4, 2, Fraction(28, 32)),
            (100, 10, 3, Fraction(340, 1000)),
            (3, 3, 3, Fraction(21, 9)),
            (32, 16, 4, Fraction(208, 512)),
            (128, 64, 4, Fraction(832, 8192)),
            (784, 128, 4, Fraction(3776, 100352)),
            (9, 8, 2, Fraction(42, 72)),
        ],
    )
    def test_hand_arithmetic(self, d, k, r, expected):
        """Test exact values against hand arithmetic"""
        assert parameter_ratio(d, k, r) == expected

    def test_known_value(self):
        """Test (16, 16, 1) -> 0.1875"""
        assert float(parameter_ratio(16, 16, 1)) == 0.1875

    def test_increasing_in_rank(self):
        """Test the ratio strictly increases in r"""
        values = [parameter_ratio(32, 24, r) for r in range(1, 9)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_larger_layers_cheaper(self):
        """Test bigger d*k with fixed d + k lowers the ratio"""
        assert parameter_ratio(20, 20, 2) < parameter_ratio(30, 10, 2)

    def test_lora_variant(self):
        """Test LoRA omits the magnitude vector"""
        assert parameter_ratio(16, 16, 1, kind="lora") == Fraction(32, 256)

    def test_non_positive(self):
        """Test zero dimensions raise ParameterError"""
        with pytest.raises(ParameterError):
            parameter_ratio(0, 4, 1)


class TestNetworkParameterRatio:
    """Test cases for network_parameter_ratio"""

    def test_single_layer(self):
        """Test one layer reduces to parameter_ratio"""
        assert network_parameter_ratio(_network((12, 6), rank=2)) == parameter_ratio(12, 6, 2)

    def test_two_identical_layers(self):
        """Test two identical layers give the ratio of one"""
        assert network_parameter_ratio(_network((8, 8), (8, 8))) == parameter_ratio(8, 8, 1)

    def test_missing_adapter(self):
        """Test a layer without adapter raises ParameterError"""
        net = _network((4, 4))
        net.layers[0].adapter = None
        with pytest.raises(ParameterError):
            network_parameter_ratio(net)
