"""Result tables, seed summaries and the metadata sidecar"""

import csv
import json
from collections import defaultdict
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from rimc_calibration.models import RESULT_FIELDS, RESULT_KEY

SUMMARY_GROUP = ("method", "rank", "rho", "n_samples")
SUMMARY_METRICS = ("acc_teacher", "acc_drifted", "acc_calibrated", "gamma_total", "rram_writes", "sram_updates")


def results_filename(result_format: str) -> str:
    return "results.jsonl" if result_format == "json-lines" else "results.csv"


def sort_rows(rows: Iterable[dict[str, Any]]) -> list[dict[str, Any]]:
    return sorted(rows, key=lambda row: tuple(row[name] for name in RESULT_KEY))


def write_results(rows: Iterable[dict[str, Any]], path: Path, result_format: str) -> Path:
    """One header row (csv) or one object per line (json-lines), rows sorted by key"""
    ordered = [{name: row[name] for name in RESULT_FIELDS} for row in sort_rows(rows)]
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if result_format == "json-lines":
            for row in ordered:
                handle.write(json.dumps(row, sort_keys=False) + "\n")
        else:
            writer = csv.DictWriter(handle, fieldnames=list(RESULT_FIELDS), lineterminator="\n")
            writer.writeheader()
            writer.writerows(ordered)
    return path


def read_results(path: Path) -> list[dict[str, Any]]:
    """Parse a file written by ``write_results``"""
    if path.suffix == ".jsonl":
        with open(path, encoding="utf-8") as handle:
            return [json.loads(line) for line in handle if line.strip()]
    with open(path, encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    for row in rows:
        for name in ("rank", "n_samples", "seed", "rram_writes", "sram_updates"):
            row[name] = int(row[name])
        for name in ("rho", "acc_teacher", "acc_drifted", "acc_calibrated", "gamma_total"):
            row[name] = float(row[name])
    return rows


def summarize(rows: Iterable[dict[str, Any]]) -> list[dict[str, Any]]:
    """Median over seeds for every (method, rank, rho, n_samples) group"""
    groups: dict[tuple, list[dict[str, Any]]] = defaultdict(list)
    for row in rows:
        groups[tuple(row[name] for name in SUMMARY_GROUP)].append(row)
    summary = []
    for group in sorted(groups):
        members = groups[group]
        entry: dict[str, Any] = dict(zip(SUMMARY_GROUP, group))
        entry["seeds"] = len(members)
        for metric in SUMMARY_METRICS:
            entry[f"median_{metric}"] = float(np.median([m[metric] for m in members]))
        summary.append(entry)
    return summary


def write_summary(rows: Iterable[dict[str, Any]], path: Path) -> Path:
    summary = summarize(rows)
    fieldnames = list(SUMMARY_GROUP) + ["seeds"] + [f"median_{m}" for m in SUMMARY_METRICS]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(summary)
    return path


def write_metadata(metadata: dict[str, Any], path: Path) -> Path:
    """Timestamps, wall-clock times and failures live here, never in result files"""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(metadata, handle, indent=2, sort_keys=True, default=str)
        handle.write("\n")
    return path
