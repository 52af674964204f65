"""Cartesian sweeps over method, rank, drift, calibration-set size and seed"""

import logging
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from itertools import product
from multiprocessing import Pool
from pathlib import Path
from typing import Any

from rimc_calibration.config import RESULTS_DB_FILENAME, RESULTS_DB_URL
from rimc_calibration.database import SessionMaker, dispose_engines, sqlite_url
from rimc_calibration.nn import load_model
from rimc_calibration.services.config_loader import ExperimentConfig
from rimc_calibration.services.experiment_service import TEACHER_FILE, CellKey, ExperimentService
from rimc_calibration.services.result_files import (
    results_filename,
    write_metadata,
    write_results,
    write_summary,
)
from rimc_calibration.services.result_service import ResultService


def sweep_cells(config: ExperimentConfig) -> list[CellKey]:
    """Every (method, rank, rho, n_samples, seed) cell, sorted

    The backprop baseline has no rank; its cells use rank 0 and appear once.
    """
    sweep = config.calibration
    cells = {
        CellKey(method, 0 if method == "backprop" else rank, rho, n_samples, seed)
        for method, rank, rho, n_samples, seed in product(
            sweep.methods, sweep.ranks, config.drift.rho, sweep.n_samples, config.drift.seeds
        )
    }
    return sorted(cells, key=CellKey.as_tuple)


def _run_cell_task(task: tuple[ExperimentConfig, str, CellKey]) -> tuple[CellKey, dict | None, str | None]:
    """Worker entry point; each cell owns its models and random streams"""
    config, teacher_path, key = task
    try:
        teacher = load_model(teacher_path)
        result = ExperimentService(config).run_cell(teacher, key)
        return key, result.to_row(), None
    except Exception as e:
        logging.error(f"SweepService.run_cell: {key.as_tuple()} failed: {type(e).__name__}: {e}")
        return key, None, f"{type(e).__name__}: {e}"


@dataclass
class SweepOutcome:
    """Paths and counts of a finished sweep"""

    results_path: Path
    summary_path: Path
    metadata_path: Path
    completed: int = 0
    skipped: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)


class SweepService:
    """Runs every cell of a sweep, one ResultRow per cell, resumable by key

    Cells run in a process pool of ``config.workers``; the parent process is the only
    writer to the results ledger.
    """

    def __init__(self, config: ExperimentConfig, db_url: str | None = None) -> None:
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.db_url = db_url or RESULTS_DB_URL or sqlite_url(str(self.out_dir / RESULTS_DB_FILENAME))

    def _teacher_path(self, experiment: ExperimentService) -> Path:
        if self.config.model_file:
            return Path(self.config.model_file)
        path = self.out_dir / TEACHER_FILE
        if not path.exists():
            logging.info(f"SweepService.run: no teacher at {path}; training one")
            experiment.train_teacher(save=True)
        return path

    def run(self, resume: bool = True) -> SweepOutcome:
        """Execute pending cells and export results, summary and metadata

        Args:
            resume (bool): skip cells whose key is already in the ledger; when False the
                ledger is cleared first

        Returns:
            SweepOutcome: file locations and counts
        """
        started_at = datetime.now(timezone.utc)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        experiment = ExperimentService(self.config)
        teacher_path = self._teacher_path(experiment)

        with SessionMaker(self.db_url) as session:
            results = ResultService(session)
            if not resume:
                cleared = results.clear()
                if cleared:
                    logging.info(f"SweepService.run: cleared {cleared} rows from {self.db_url}")
            done = results.completed_keys()

        cells = sweep_cells(self.config)
        pending = [cell for cell in cells if cell.as_tuple() not in done]
        skipped = len(cells) - len(pending)
        if skipped:
            logging.info(f"SweepService.run: {skipped} cells already complete, {len(pending)} to run")

        tasks = [(self.config, str(teacher_path), cell) for cell in pending]
        failures: list[dict[str, Any]] = []
        wall_ms: dict[str, float] = {}
        completed = 0
        sweep_start = time.perf_counter()

        with SessionMaker(self.db_url) as session:
            results = ResultService(session)
            for key, row, error in self._execute(tasks):
                if row is None:
                    logging.warning(f"SweepService.run: cell {key.as_tuple()} skipped: {error}")
                    failures.append({"cell": list(key.as_tuple()), "error": error})
                    continue
                if results.record(row) is None:
                    failures.append({"cell": list(key.as_tuple()), "error": "database insert failed"})
                    continue
                wall_ms["/".join(map(str, key.as_tuple()))] = row["wall_ms"]
                completed += 1
            rows = results.rows()

        outcome = SweepOutcome(
            results_path=write_results(
                rows, self.out_dir / results_filename(self.config.format), self.config.format
            ),
            summary_path=write_summary(rows, self.out_dir / "summary.csv"),
            metadata_path=self.out_dir / "metadata.json",
            completed=completed,
            skipped=skipped,
            failures=failures,
        )
        write_metadata(
            {
                "started_at": started_at.isoformat(),
                "finished_at": datetime.now(timezone.utc).isoformat(),
                "sweep_wall_ms": (time.perf_counter() - sweep_start) * 1000.0,
                "cells_total": len(cells),
                "cells_completed": completed,
                "cells_skipped": skipped,
                "cell_wall_ms": wall_ms,
                "failures": failures,
                "database": self.db_url,
                "config": asdict(self.config),
            },
            outcome.metadata_path,
        )
        dispose_engines()
        logging.info(
            f"SweepService.run: {completed} cells run, {skipped} resumed, {len(failures)} failed; "
            f"results in {outcome.results_path}"
        )
        return outcome

    def _execute(self, tasks: list[tuple[ExperimentConfig, str, CellKey]]):
        if self.config.workers <= 1 or len(tasks) <= 1:
            for task in tasks:
                yield _run_cell_task(task)
            return
        with Pool(processes=self.config.workers) as pool:
            yield from pool.imap_unordered(_run_cell_task, tasks)
