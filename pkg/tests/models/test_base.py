"""Tests for models/base.py"""

from sqlalchemy.orm import DeclarativeBase

from rimc_calibration.models.base import Base


class TestBase:
    """Test cases for Base model"""

    def test_base_is_declarative_base(self):
        """Test that Base is a SQLAlchemy declarative base"""
        assert issubclass(Base, DeclarativeBase)
        assert hasattr(Base, "registry")

    def test_ledger_table_registered(self):
        """Test the ledger table is part of the metadata"""
        assert "result_rows" in Base.metadata.tables
