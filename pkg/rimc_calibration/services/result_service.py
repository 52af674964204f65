"""Service class for ResultRow model"""

from sqlalchemy.orm import Session

from rimc_calibration.models import ResultRow
from rimc_calibration.repos import ResultRowRepository


class ResultService:
    """Service class for ResultRow model"""

    def __init__(self, session: Session):
        self.repository = ResultRowRepository(session)

    def completed_keys(self) -> set[tuple]:
        """Keys already present in the ledger"""
        return self.repository.list_keys()

    def record(self, row: dict) -> ResultRow | None:
        """Store one cell unless its key is already present

        Args:
            row (dict): ResultRow columns

        Returns:
            ResultRow | None: The stored (or existing) row, None if the insert failed
        """
        existing = self.repository.get_row(
            row["method"], row["rank"], row["rho"], row["n_samples"], row["seed"]
        )
        if existing is not None:
            return existing
        return self.repository.add_row(**row)

    def rows(self, include_timing: bool = False) -> list[dict]:
        """Every row as a plain mapping, sorted by key"""
        return [row.to_dict(include_timing) for row in self.repository.list_rows()]

    def clear(self) -> int:
        return self.repository.delete_all()
