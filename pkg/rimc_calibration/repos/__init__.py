"""Repositories for the results ledger"""

from rimc_calibration.repos.result_row_repo import ResultRowRepository

__all__ = ["ResultRowRepository"]
