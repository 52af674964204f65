"""Tests for services/result_service.py"""

from unittest.mock import Mock, patch

from rimc_calibration.database import SessionMaker, dispose_engines, sqlite_url
from rimc_calibration.services.result_service import ResultService


def _row(seed=0):
    return {
        "method": "dora",
        "rank": 2,
        "rho": 0.2,
        "n_samples": 10,
        "seed": seed,
        "acc_teacher": 0.9,
        "acc_drifted": 0.4,
        "acc_calibrated": 0.8,
        "gamma_total": 0.05,
        "rram_writes": 0,
        "sram_updates": 40,
        "wall_ms": 5.0,
    }


class TestResultService:
    """Test cases for ResultService"""

    def setup_method(self):
        """Set up test fixtures"""
        self.mock_session = Mock()
        self.mock_repo = Mock()
        with patch("rimc_calibration.services.result_service.ResultRowRepository", return_value=self.mock_repo):
            self.service = ResultService(self.mock_session)

    def test_record_new(self):
        """Test a new key is inserted"""
        self.mock_repo.get_row.return_value = None
        self.service.record(_row())
        self.mock_repo.add_row.assert_called_once_with(**_row())

    def test_record_existing(self):
        """Test an existing key is returned without insert"""
        existing = Mock()
        self.mock_repo.get_row.return_value = existing
        assert self.service.record(_row()) is existing
        self.mock_repo.add_row.assert_not_called()

    def test_completed_keys(self):
        """Test completed keys come from the repository"""
        self.mock_repo.list_keys.return_value = {("dora", 2, 0.2, 10, 0)}
        assert self.service.completed_keys() == {("dora", 2, 0.2, 10, 0)}


class TestResultServiceSqlite:
    """Test cases for ResultService against a SQLite file"""

    def teardown_method(self):
        """Drop cached engines"""
        dispose_engines()

    def test_round_trip(self, tmp_path):
        """Test rows are stored once per key and read back sorted"""
        url = sqlite_url(str(tmp_path / "ledger.sqlite"))
        with SessionMaker(url) as session:
            service = ResultService(session)
            service.record(_row(seed=1))
            service.record(_row(seed=0))
            service.record(_row(seed=1))
            rows = service.rows()
            keys = service.completed_keys()
        assert [r["seed"] for r in rows] == [0, 1]
        assert "wall_ms" not in rows[0]
        assert keys == {("dora", 2, 0.2, 10, 0), ("dora", 2, 0.2, 10, 1)}

    def test_clear(self, tmp_path):
        """Test clear empties the ledger"""
        url = sqlite_url(str(tmp_path / "ledger.sqlite"))
        with SessionMaker(url) as session:
            service = ResultService(session)
            service.record(_row())
            assert service.clear() == 1
            assert service.rows() == []
