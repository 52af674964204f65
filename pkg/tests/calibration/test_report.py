"""Tests for calibration/report.py"""

import json

from rimc_calibration.calibration import CalibrationReport, LayerReport


class TestCalibrationReport:
    """Test cases for CalibrationReport"""

    def setup_method(self):
        """Set up test fixtures"""
        self.report = CalibrationReport(
            method="dora",
            layers=[LayerReport(0, "dense", 4, 3, 0.5, [0.4, 0.2], 8)],
            gamma_total=0.25,
            wall_ms=12.5,
        )

    def test_json_excludes_timing(self):
        """Test the default JSON form has no wall-clock field"""
        payload = json.loads(self.report.to_json())
        assert "wall_ms" not in payload
        assert payload["layers"][0]["loss_curve"] == [0.4, 0.2]

    def test_json_is_stable(self):
        """Test repeated serialization is byte-identical"""
        assert self.report.to_json() == self.report.to_json()

    def test_dict_with_timing(self):
        """Test to_dict keeps timing by default"""
        assert self.report.to_dict()["wall_ms"] == 12.5

    def test_final_loss(self):
        """Test final_loss falls back to the initial loss"""
        assert self.report.layers[0].final_loss == 0.2
        assert LayerReport(1, "dense", 2, 2, 0.7, [], 0).final_loss == 0.7

    def test_quant_error_serialized(self):
        """Test the int8 forward error is null unless quantized"""
        self.report.layers.append(LayerReport(2, "dense", 3, 2, 0.3, [0.1], 4, quant_error=2.5e-3))
        layers = json.loads(self.report.to_json())["layers"]
        assert [layer["quant_error"] for layer in layers] == [None, 2.5e-3]
