"""YAML experiment configuration"""

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from rimc_calibration.calibration import CalibConfig
from rimc_calibration.config import (
    CONFIG_SCHEMA_VERSION,
    G_MAX_US,
    METHODS,
    PRESETS,
    REF_ADAPTER_SAMPLES,
    REF_BACKPROP_SAMPLES,
    REF_BACKPROP_UPDATE_SAMPLES,
    RESULT_FORMATS,
    RRAM_ENDURANCE,
    RRAM_WRITE_NS,
    SRAM_ENDURANCE,
    SRAM_RRAM_SPEED_RATIO,
    WORKERS,
)
from rimc_calibration.exceptions import ConfigError, ParameterError
from rimc_calibration.nn import TrainHyper
from rimc_calibration.rram import ProgramSpec

DATASET_KINDS = ("blobs", "idx", "csv")


@dataclass(frozen=True)
class DatasetSpec:
    """Synthetic blobs or files on disk, plus the train/test split"""

    kind: str = "blobs"
    classes: int = 4
    dims: int = 16
    n: int = 2000
    seed: int = 0
    separation: float = 3.0
    offset: float = 0.0
    image_shape: tuple[int, ...] | None = None
    test_fraction: float = 0.25
    images: str | None = None
    labels: str | None = None
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in DATASET_KINDS:
            raise ConfigError(f"dataset.kind must be one of {DATASET_KINDS}, got '{self.kind}'")
        if self.kind == "idx" and not (self.images and self.labels):
            raise ConfigError("dataset.kind 'idx' needs 'images' and 'labels' paths")
        if self.kind == "csv" and not self.path:
            raise ConfigError("dataset.kind 'csv' needs a 'path'")


@dataclass(frozen=True)
class DriftSweep:
    """Drift levels, seeds and programming settings of the deployment"""

    rho: tuple[float, ...] = (0.2,)
    mu_rel: float = 0.0
    seeds: tuple[int, ...] = (0,)
    sigma_prog: float = 0.0
    verify_tol: float = 0.5
    max_attempts: int = 10
    g_max: float = G_MAX_US
    accumulate: bool = False

    def __post_init__(self) -> None:
        if not self.rho or not self.seeds:
            raise ConfigError("drift.rho and drift.seeds must be non-empty lists")
        if any(r < 0 for r in self.rho):
            raise ConfigError(f"drift.rho values must be >= 0, got {self.rho}")
        if any(s < 0 for s in self.seeds):
            raise ConfigError(f"drift.seeds must be non-negative, got {self.seeds}")

    @property
    def program_spec(self) -> ProgramSpec:
        return ProgramSpec(self.sigma_prog, self.verify_tol, self.max_attempts)


@dataclass(frozen=True)
class CalibrationSweep:
    """Methods, ranks and calibration-set sizes crossed in a sweep, plus shared settings"""

    methods: tuple[str, ...] = ("dora",)
    ranks: tuple[int, ...] = (4,)
    n_samples: tuple[int, ...] = (10,)
    settings: CalibConfig = field(default_factory=CalibConfig)

    def __post_init__(self) -> None:
        if not self.methods or not self.ranks or not self.n_samples:
            raise ConfigError("calibration.methods, ranks and n_samples must be non-empty lists")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"calibration.methods: unknown {unknown}, expected {METHODS}")

    def for_cell(self, method: str, rank: int, n_samples: int, seed: int) -> CalibConfig:
        """Settings of one sweep cell"""
        return replace(
            self.settings,
            adapter_kind=method if method != "backprop" else self.settings.adapter_kind,
            rank=rank,
            n_calib_samples=n_samples,
            seed=seed,
        )


@dataclass(frozen=True)
class CostOverrides:
    """Cost-model constants and the dataset sizes of the comparison table"""

    rram_endurance: int = RRAM_ENDURANCE
    sram_endurance: int = SRAM_ENDURANCE
    rram_write_ns: float = RRAM_WRITE_NS
    sram_rram_speed_ratio: float = SRAM_RRAM_SPEED_RATIO
    epochs: int = 20
    backprop_samples: int = REF_BACKPROP_SAMPLES
    backprop_update_samples: int = REF_BACKPROP_UPDATE_SAMPLES
    adapter_samples: int = REF_ADAPTER_SAMPLES
    params_total: int | None = None
    gamma: float | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment file: model, data, teacher training, deployment, calibration, cost"""

    version: int = CONFIG_SCHEMA_VERSION
    preset: str = "mlp"
    model_file: str | None = None
    dataset: DatasetSpec = field(default_factory=DatasetSpec)
    teacher: TrainHyper = field(default_factory=TrainHyper)
    drift: DriftSweep = field(default_factory=DriftSweep)
    calibration: CalibrationSweep = field(default_factory=CalibrationSweep)
    cost: CostOverrides = field(default_factory=CostOverrides)
    out_dir: str = "runs/default"
    format: str = "csv"
    seed: int = 0
    workers: int = WORKERS

    def __post_init__(self) -> None:
        if self.version != CONFIG_SCHEMA_VERSION:
            raise ConfigError(
                f"config version {self.version} is not supported (expected {CONFIG_SCHEMA_VERSION})"
            )
        if self.preset not in PRESETS:
            raise ConfigError(f"preset must be one of {PRESETS}, got '{self.preset}'")
        if self.format not in RESULT_FORMATS:
            raise ConfigError(f"format must be one of {RESULT_FORMATS}, got '{self.format}'")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


def _build(cls: type, section: str, raw: Any, converters: dict[str, Any] | None = None) -> Any:
    """Instantiate a dataclass from a mapping, rejecting unknown keys"""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"section '{section}' must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"section '{section}': unknown keys {unknown}")
    values = dict(raw)
    for key, convert in (converters or {}).items():
        if key in values and values[key] is not None:
            values[key] = convert(values[key])
    try:
        return cls(**values)
    except ConfigError:
        raise
    except (ParameterError, TypeError, ValueError) as e:
        raise ConfigError(f"section '{section}': {e}") from e


def _as_floats(value: Any) -> tuple[float, ...]:
    return tuple(float(v) for v in _as_tuple(value))


def _as_tuple(value: Any) -> tuple:
    return tuple(value) if isinstance(value, (list, tuple)) else (value,)


def parse_config(document: dict[str, Any]) -> ExperimentConfig:
    """Turn a parsed YAML mapping into an ``ExperimentConfig``

    Raises:
        ConfigError: If the version is missing or wrong, or any key is unknown or invalid
    """
    if not isinstance(document, dict):
        raise ConfigError("config document must be a mapping")
    if "version" not in document:
        raise ConfigError("config is missing the 'version' key")

    raw = dict(document)
    if isinstance(raw.get("teacher"), dict) and "seed" in raw["teacher"]:
        raise ConfigError("section 'teacher': the training seed is the top-level 'seed' key")
    calibration = dict(raw.pop("calibration", None) or {})
    sweep_keys = {"methods", "ranks", "n_samples"}
    settings = _build(CalibConfig, "calibration", {k: v for k, v in calibration.items() if k not in sweep_keys})
    sweep = _build(
        CalibrationSweep,
        "calibration",
        {k: v for k, v in calibration.items() if k in sweep_keys},
        {"methods": _as_tuple, "ranks": _as_tuple, "n_samples": _as_tuple},
    )
    sections = {
        "dataset": _build(DatasetSpec, "dataset", raw.pop("dataset", None), {"image_shape": tuple}),
        "teacher": _build(TrainHyper, "teacher", raw.pop("teacher", None)),
        "drift": _build(DriftSweep, "drift", raw.pop("drift", None), {"rho": _as_floats, "seeds": _as_tuple}),
        "calibration": replace(sweep, settings=settings),
        "cost": _build(CostOverrides, "cost", raw.pop("cost", None)),
    }
    output = raw.pop("output", None) or {}
    if not isinstance(output, dict) or set(output) - {"dir", "format"}:
        raise ConfigError("section 'output' accepts only 'dir' and 'format'")
    if "dir" in output:
        raw["out_dir"] = output["dir"]
    if "format" in output:
        raw["format"] = output["format"]
    return _build(ExperimentConfig, "config", {**raw, **sections})


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read a YAML experiment file; ``None`` gives the built-in defaults

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigError: If the document is malformed
    """
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, encoding="utf-8") as handle:
            document = yaml.safe_load(handle)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    config = parse_config(document)
    logging.info(f"load_config: loaded {path} (preset={config.preset}, out={config.out_dir})")
    return config


def apply_overrides(
    config: ExperimentConfig,
    seed: int | None = None,
    out_dir: str | None = None,
    workers: int | None = None,
    result_format: str | None = None,
) -> ExperimentConfig:
    """Command-line flags win over file keys"""
    changes: dict[str, Any] = {}
    if seed is not None:
        changes["seed"] = seed
    if out_dir is not None:
        changes["out_dir"] = out_dir
    if workers is not None:
        changes["workers"] = workers
    if result_format is not None:
        changes["format"] = result_format
    try:
        return replace(config, **changes) if changes else config
    except ParameterError as e:
        raise ConfigError(str(e)) from e
