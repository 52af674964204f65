"""Tests for adapters/quantize.py"""

import numpy as np
import pytest

from rimc_calibration.adapters import (
    DoraAdapter,
    LoraAdapter,
    dequantize,
    init_dora,
    quantization_forward_error,
    quantize_int8,
    quantize_tensor,
)
from rimc_calibration.exceptions import ParameterError


class TestQuantizeTensor:
    """Test cases for quantize_tensor"""

    def test_zeros(self):
        """Test a zero tensor has scale 1 and round-trips exactly"""
        q = quantize_tensor(np.zeros((3, 2)))
        assert q.scale == 1.0
        assert np.all(q.codes == 0)
        assert np.array_equal(q.dequantize(), np.zeros((3, 2)))

    def test_grid_round_trip(self):
        """Test values on the int8 grid survive exactly"""
        scale = 0.25
        t = np.arange(-127, 128, dtype=float) * scale
        q = quantize_tensor(t)
        assert q.scale == scale
        assert np.array_equal(q.dequantize(), t)

    def test_error_bound(self):
        """Test per-element error is at most scale / 2"""
        t = np.random.default_rng(0).normal(size=(20, 7))
        q = quantize_tensor(t)
        assert np.all(np.abs(q.dequantize() - t) <= q.scale / 2 + 1e-15)
        assert q.codes.dtype == np.int8

    def test_round_half_to_even(self):
        """Test ties round to the even code"""
        q = quantize_tensor(np.array([127.0, 0.5, 1.5, -2.5]))
        assert q.codes.tolist() == [127, 0, 2, -2]

    def test_non_finite(self):
        """Test NaN raises ParameterError"""
        with pytest.raises(ParameterError):
            quantize_tensor(np.array([np.nan]))


class TestQuantizeAdapter:
    """Test cases for quantize_int8 and dequantize"""

    def test_dora_round_trip_kind(self):
        """Test a DoRA adapter comes back as DoRA with its mode"""
        ad = init_dora(np.random.default_rng(1).normal(size=(6, 4)), 2, 0, mode="activation_norm")
        back = dequantize(quantize_int8(ad))
        assert isinstance(back, DoraAdapter)
        assert back.mode == "activation_norm"
        assert back.m.shape == (1, 4)

    def test_lora_round_trip_kind(self):
        """Test a LoRA adapter comes back as LoRA"""
        ad = LoraAdapter(a=np.ones((3, 1)), b=np.ones((1, 2)))
        q = quantize_int8(ad)
        assert q.kind == "lora"
        assert isinstance(dequantize(q), LoraAdapter)
        assert q.num_params == ad.num_params

    def test_forward_error_is_small(self):
        """Test the int8 forward deviation is reported and small"""
        gen = np.random.default_rng(2)
        w = gen.normal(size=(6, 4))
        ad = init_dora(w, 2, 0)
        ad.b = gen.normal(size=(2, 4)) * 0.1
        error = quantization_forward_error(gen.normal(size=(5, 6)), w, ad)
        assert 0.0 <= error < 0.1
