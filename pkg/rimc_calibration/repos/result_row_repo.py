"""Repository for ResultRow model"""

import logging

from sqlalchemy import Select
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from rimc_calibration.models.result_row import ResultRow


class ResultRowRepository:
    """Repository for ResultRow model"""

    def __init__(self, session: Session) -> None:
        self.session = session

    def get_row(self, method: str, rank: int, rho: float, n_samples: int, seed: int) -> ResultRow | None:
        """Get the row of one sweep cell

        Returns:
            ResultRow | None: The row if found, None otherwise
        """
        stmt: Select = Select(ResultRow).where(
            ResultRow.method == method,
            ResultRow.rank == rank,
            ResultRow.rho == rho,
            ResultRow.n_samples == n_samples,
            ResultRow.seed == seed,
        )
        try:
            return self.session.execute(stmt).scalars().first()
        except SQLAlchemyError as e:
            logging.error(f"ResultRowRepo.get_row: SQLAlchemyError: {e}")
            return None

    def list_keys(self) -> set[tuple]:
        """Keys of every completed cell

        Returns:
            set[tuple]: (method, rank, rho, n_samples, seed) tuples
        """
        stmt: Select = Select(
            ResultRow.method, ResultRow.rank, ResultRow.rho, ResultRow.n_samples, ResultRow.seed
        )
        try:
            return {tuple(row) for row in self.session.execute(stmt).all()}
        except SQLAlchemyError as e:
            logging.error(f"ResultRowRepo.list_keys: SQLAlchemyError: {e}")
            return set()

    def list_rows(self) -> list[ResultRow]:
        """All rows sorted by key"""
        stmt: Select = Select(ResultRow).order_by(
            ResultRow.method, ResultRow.rank, ResultRow.rho, ResultRow.n_samples, ResultRow.seed
        )
        try:
            return list(self.session.execute(stmt).scalars().all())
        except SQLAlchemyError as e:
            logging.error(f"ResultRowRepo.list_rows: SQLAlchemyError: {e}")
            return []

    def add_row(self, **fields) -> ResultRow | None:
        """Insert one completed cell

        Args:
            **fields: ResultRow columns

        Returns:
            ResultRow | None: The stored row or None if the insert failed
        """
        try:
            row = ResultRow(**fields)
            self.session.add(row)
            self.session.commit()
            self.session.refresh(row)
            return row
        except SQLAlchemyError as e:
            logging.error(f"ResultRowRepo.add_row: SQLAlchemyError: {e}")
            self.session.rollback()
            return None

    def delete_all(self) -> int:
        """Remove every row (fresh, non-resumed sweeps)

        Returns:
            int: Number of rows deleted
        """
        try:
            count = self.session.query(ResultRow).delete()
            self.session.commit()
            return count
        except SQLAlchemyError as e:
            logging.error(f"ResultRowRepo.delete_all: SQLAlchemyError: {e}")
            self.session.rollback()
            return 0
