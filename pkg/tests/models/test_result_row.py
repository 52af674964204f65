"""Tests for models/result_row.py"""

from rimc_calibration.models import RESULT_FIELDS, RESULT_KEY, ResultRow


class TestResultRow:
    """Test cases for ResultRow model"""

    def setup_method(self):
        """Set up test fixtures"""
        self.row = ResultRow(
            method="dora",
            rank=4,
            rho=0.2,
            n_samples=10,
            seed=1,
            acc_teacher=0.9,
            acc_drifted=0.5,
            acc_calibrated=0.85,
            gamma_total=0.1,
            rram_writes=0,
            sram_updates=200,
            wall_ms=3.0,
        )

    def test_tablename(self):
        """Test table name"""
        assert ResultRow.__tablename__ == "result_rows"

    def test_key(self):
        """Test key follows RESULT_KEY order"""
        assert self.row.key == ("dora", 4, 0.2, 10, 1)
        assert RESULT_FIELDS[: len(RESULT_KEY)] == RESULT_KEY

    def test_to_dict_without_timing(self):
        """Test to_dict holds RESULT_FIELDS only by default"""
        data = self.row.to_dict()
        assert tuple(data) == RESULT_FIELDS
        assert "wall_ms" not in data
        assert self.row.to_dict(include_timing=True)["wall_ms"] == 3.0

    def test_unique_key_constraint(self):
        """Test the key columns are unique together"""
        constraint = next(c for c in ResultRow.__table__.constraints if c.name == "uq_result_rows_key")
        assert tuple(col.name for col in constraint.columns) == RESULT_KEY

    def test_repr(self):
        """Test string representation"""
        assert repr(self.row) == "<ResultRow(method='dora', rank=4, rho=0.2, n_samples=10, seed=1)>"
