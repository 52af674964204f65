"""Tests for config.py"""

import importlib
from unittest.mock import patch

import rimc_calibration.config as config


class TestConfig:
    """Test cases for config module"""

    def teardown_method(self):
        """Restore module defaults"""
        importlib.reload(config)

    def test_method_lists(self):
        """Test that method and adapter lists are defined"""
        assert config.METHODS == ("dora", "lora", "backprop")
        assert set(config.ADAPTER_KINDS) <= set(config.METHODS)
        assert "weight_norm" in config.DORA_MODES

    def test_default_cost_constants(self):
        """Test default endurance and speed constants"""
        with patch.dict("os.environ", {}, clear=True):
            importlib.reload(config)
            assert config.RRAM_ENDURANCE == 10**8
            assert config.SRAM_ENDURANCE == 10**16
            assert config.RRAM_WRITE_NS == 100.0
            assert config.SRAM_RRAM_SPEED_RATIO == 100.0
            assert config.RESULTS_DB_URL is None

    @patch.dict("os.environ", {"RIMC_RRAM_ENDURANCE": "1e6", "RIMC_WORKERS": "4"})
    def test_values_from_env(self):
        """Test constants read from the environment"""
        importlib.reload(config)
        assert config.RRAM_ENDURANCE == 1_000_000
        assert config.WORKERS == 4

    def test_g_max_default(self):
        """Test the default full-scale conductance"""
        with patch.dict("os.environ", {}, clear=True):
            importlib.reload(config)
            assert config.G_MAX_US == 100.0

    def test_format_versions(self):
        """Test file format constants"""
        assert config.MODEL_FORMAT_VERSION == 1
        assert config.MODEL_FILE_MAGIC.startswith(b"RIMC")
