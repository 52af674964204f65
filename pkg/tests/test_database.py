"""Tests for database.py"""

from unittest.mock import patch

import pytest
from sqlalchemy import inspect

import rimc_calibration.database as db_module
from rimc_calibration.database import SessionMaker, dispose_engines, get_engine, get_session_maker, sqlite_url
from rimc_calibration.exceptions import ConfigError


class TestDatabase:
    """Test cases for database module"""

    def teardown_method(self):
        """Drop cached engines between tests"""
        dispose_engines()

    def test_session_maker_exists(self):
        """Test that SessionMaker is defined"""
        assert SessionMaker is not None

    def test_engine_creates_schema(self, tmp_path):
        """Test get_engine creates the result_rows table"""
        engine = get_engine(sqlite_url(str(tmp_path / "results.sqlite")))
        assert "result_rows" in inspect(engine).get_table_names()

    def test_engines_cached_per_url(self, tmp_path):
        """Test the same URL reuses one engine and session maker"""
        url = sqlite_url(str(tmp_path / "a.sqlite"))
        assert get_engine(url) is get_engine(url)
        assert get_session_maker(url) is get_session_maker(url)
        assert get_engine(url) is not get_engine(sqlite_url(str(tmp_path / "b.sqlite")))

    @patch("rimc_calibration.database.create_engine")
    @patch("rimc_calibration.database.Base")
    def test_engine_configuration(self, mock_base, mock_create_engine):
        """Test create_engine is called once with pre-ping"""
        get_engine("test://connection")
        get_engine("test://connection")
        mock_create_engine.assert_called_once_with("test://connection", pool_pre_ping=True)
        mock_base.metadata.create_all.assert_called_once()

    def test_session_maker_context_manager(self, tmp_path):
        """Test SessionMaker as context manager"""
        with SessionMaker(sqlite_url(str(tmp_path / "c.sqlite"))) as session:
            assert session is not None

    def test_get_engine_no_url(self):
        """Test get_engine raises ConfigError when no URL is configured"""
        with patch.object(db_module, "RESULTS_DB_URL", None):
            with pytest.raises(ConfigError, match="RIMC_RESULTS_DB_URL"):
                db_module.get_engine()

    def test_sqlite_url(self):
        """Test sqlite_url builds a file URL"""
        assert sqlite_url("/tmp/x.sqlite") == "sqlite:////tmp/x.sqlite"
