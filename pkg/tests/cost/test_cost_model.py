"""Tests for cost/cost_model.py"""

from fractions import Fraction

import pytest

from rimc_calibration.cost import (
    CostModel,
    lifespan_calibrations,
    rounded_lifespan,
    speedup_factor,
    update_time_seconds,
    updates_per_calibration,
)
from rimc_calibration.exceptions import ParameterError


class TestCostModel:
    """Test cases for CostModel"""

    def setup_method(self):
        """Set up test fixtures"""
        self.cm = CostModel(rram_endurance=10**8, sram_endurance=10**16)

    def test_endurance_for(self):
        """Test backprop wears RRAM and adapters wear SRAM"""
        assert self.cm.endurance_for("backprop") == 10**8
        assert self.cm.endurance_for("dora") == 10**16
        assert self.cm.endurance_for("lora") == 10**16

    def test_unknown_method(self):
        """Test an unknown method raises ParameterError"""
        with pytest.raises(ParameterError):
            self.cm.endurance_for("sgd")

    @pytest.mark.parametrize(
        "kwargs", [{"rram_endurance": 0}, {"rram_write_ns": 0.0}, {"sram_rram_speed_ratio": -1.0}]
    )
    def test_non_positive_constants(self, kwargs):
        """Test non-positive constants raise ParameterError"""
        with pytest.raises(ParameterError):
            CostModel(**kwargs)

    def test_trainable_exceeds_total(self):
        """Test params_trainable > params_total raises ParameterError"""
        with pytest.raises(ParameterError):
            CostModel(params_total=10, params_trainable=11)


class TestUpdatesAndLifespan:
    """Test cases for update counts and lifespans"""

    def setup_method(self):
        """Set up test fixtures"""
        self.cm = CostModel(rram_endurance=10**8, sram_endurance=10**16)

    def test_backprop_updates(self):
        """Test 20 epochs over 120 samples give 2400 updates"""
        assert updates_per_calibration("backprop", 20, 120) == 2400

    def test_adapter_updates(self):
        """Test 20 epochs over 10 samples give 200 updates"""
        assert updates_per_calibration("dora", 20, 10) == 200

    def test_batched_updates(self):
        """Test batches round up"""
        assert updates_per_calibration("dora", 3, 10, batch=4) == 9

    def test_zero_epochs(self):
        """Test zero epochs give zero updates"""
        assert updates_per_calibration("lora", 0, 10) == 0

    def test_backprop_lifespan(self):
        """Test RRAM lifespan is floor(1e8 / 2400)"""
        assert lifespan_calibrations(self.cm, "backprop", 2400) == 41666
        assert rounded_lifespan(self.cm, "backprop", 2400) == 41667

    def test_adapter_lifespan(self):
        """Test SRAM lifespan is 5e13"""
        assert lifespan_calibrations(self.cm, "dora", 200) == 50_000_000_000_000
        assert rounded_lifespan(self.cm, "dora", 200) == 50_000_000_000_000

    def test_lifespan_zero_updates(self):
        """Test zero updates raise ParameterError"""
        with pytest.raises(ParameterError):
            lifespan_calibrations(self.cm, "dora", 0)

    def test_rounding_half_up(self):
        """Test an exact half rounds up"""
        cm = CostModel(rram_endurance=5)
        assert lifespan_calibrations(cm, "backprop", 2) == 2
        assert rounded_lifespan(cm, "backprop", 2) == 3


class TestSpeedAndTime:
    """Test cases for speedup_factor and update_time_seconds"""

    def test_speedup(self):
        """Test 10 of 125 samples at 100x SRAM speed gives 1250"""
        assert speedup_factor(CostModel(), Fraction(10, 125)) == 1250

    def test_speedup_full_dataset(self):
        """Test the full dataset leaves only the memory speed ratio"""
        assert speedup_factor(CostModel(sram_rram_speed_ratio=100.0), 1) == 100

    @pytest.mark.parametrize("fraction", [0, 1.5, -0.1])
    def test_speedup_out_of_range(self, fraction):
        """Test fractions outside (0, 1] raise ParameterError"""
        with pytest.raises(ParameterError):
            speedup_factor(CostModel(), fraction)

    def test_update_time(self):
        """Test 25.6M cells at 100 ns take 2.56 s"""
        assert update_time_seconds(25_600_000, 100.0) == pytest.approx(2.56)

    def test_update_time_invalid(self):
        """Test zero parameters raise ParameterError"""
        with pytest.raises(ParameterError):
            update_time_seconds(0)
