"""Differential RRAM crossbar: programming, drift, readback and write accounting"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from rimc_calibration.config import G_MAX_US, RRAM_ENDURANCE
from rimc_calibration.exceptions import ParameterError, ShapeError
from rimc_calibration.linalg import RngStream, Tensor, gaussian, matmul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DriftSpec:
    """Relative conductance drift G_drift ~ N(mu_rel·G_t, (rho·G_t)²)"""

    rho: float
    mu_rel: float = 0.0
    seed: int = 0
    accumulate: bool = False

    def __post_init__(self) -> None:
        if self.rho < 0 or not np.isfinite(self.rho):
            raise ParameterError(f"DriftSpec: rho must be finite and >= 0, got {self.rho}")
        if not np.isfinite(self.mu_rel):
            raise ParameterError(f"DriftSpec: mu_rel must be finite, got {self.mu_rel}")


@dataclass(frozen=True)
class ProgramSpec:
    """Write-and-verify settings; sigma_prog = 0 is ideal one-shot programming"""

    sigma_prog: float = 0.0
    verify_tol: float = 0.5
    max_attempts: int = 10

    def __post_init__(self) -> None:
        if self.sigma_prog < 0:
            raise ParameterError(f"ProgramSpec: sigma_prog must be >= 0, got {self.sigma_prog}")
        if self.max_attempts < 1:
            raise ParameterError(
                f"ProgramSpec: max_attempts must be >= 1, got {self.max_attempts}"
            )
        if self.sigma_prog > 0 and self.verify_tol <= 0:
            raise ParameterError("ProgramSpec: verify_tol must be > 0 when sigma_prog > 0")


@dataclass(frozen=True)
class WriteStats:
    """Aggregates over a crossbar's write counters"""

    total_writes: int
    max_cell_writes: int
    cells_at_limit: int


@dataclass
class Crossbar:
    """Paired conductance matrices (µS) encoding one d×k weight matrix

    Positive weights live on ``g_plus`` and negative weights on ``g_minus``; the other
    device of the pair targets 0.
    """

    g_plus: Tensor
    g_minus: Tensor
    g_max: float
    w_max: float
    write_counts: NDArray[np.int64]
    target_g_plus: Tensor
    target_g_minus: Tensor

    @property
    def shape(self) -> tuple[int, int]:
        return self.g_plus.shape  # type: ignore[return-value]

    def copy(self) -> "Crossbar":
        return Crossbar(
            g_plus=self.g_plus.copy(),
            g_minus=self.g_minus.copy(),
            g_max=self.g_max,
            w_max=self.w_max,
            write_counts=self.write_counts.copy(),
            target_g_plus=self.target_g_plus.copy(),
            target_g_minus=self.target_g_minus.copy(),
        )


def _write_and_verify(
    target: Tensor, g_max: float, prog: ProgramSpec, rng: RngStream
) -> tuple[Tensor, Tensor, NDArray[np.int64]]:
    """Program both devices of every pair until they verify

    Returns:
        tuple: achieved (G⁺, G⁻) and the number of attempts per pair
    """
    target_plus, target_minus = target
    attempts = np.zeros(target_plus.shape, dtype=np.int64)

    if prog.sigma_prog == 0:
        attempts += 1
        return target_plus.copy(), target_minus.copy(), attempts

    achieved_plus = np.zeros_like(target_plus)
    achieved_minus = np.zeros_like(target_minus)
    pending = np.ones(target_plus.shape, dtype=bool)

    for _ in range(prog.max_attempts):
        if not pending.any():
            break
        count = int(pending.sum())
        noise = gaussian(rng, 0.0, prog.sigma_prog, (2, count))
        achieved_plus[pending] = np.clip(target_plus[pending] + noise[0], 0.0, g_max)
        achieved_minus[pending] = np.clip(target_minus[pending] + noise[1], 0.0, g_max)
        attempts[pending] += 1

        verified = (np.abs(achieved_plus - target_plus) <= prog.verify_tol) & (
            np.abs(achieved_minus - target_minus) <= prog.verify_tol
        )
        pending &= ~verified

    if pending.any():
        logger.warning(
            f"program_weights: {int(pending.sum())} cells failed to verify after "
            f"{prog.max_attempts} attempts"
        )
    return achieved_plus, achieved_minus, attempts


def program_weights(
    w: Tensor,
    g_max: float = G_MAX_US,
    prog: ProgramSpec | None = None,
    rng: RngStream | None = None,
    crossbar: Crossbar | None = None,
) -> Crossbar:
    """Program a weight matrix onto a differential crossbar

    Args:
        w (Tensor): d×k weights
        g_max (float): full-scale conductance (µS)
        prog (ProgramSpec | None): write-and-verify settings, ideal when None
        rng (RngStream | None): stream for programming noise
        crossbar (Crossbar | None): existing crossbar to re-program; its write
            counters keep accumulating

    Returns:
        Crossbar: programmed crossbar (a new object, ``crossbar`` is not mutated)

    Raises:
        ParameterError: If weights are non-finite or g_max <= 0
        ShapeError: If ``w`` is not a matrix or does not match ``crossbar``
    """
    prog = prog or ProgramSpec()
    if w.ndim != 2:
        raise ShapeError(f"program_weights expects a matrix, got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ParameterError("program_weights: weights must be finite")
    if not g_max > 0:
        raise ParameterError(f"program_weights: g_max must be > 0, got {g_max}")
    if crossbar is not None and crossbar.shape != w.shape:
        raise ShapeError(f"program_weights: crossbar {crossbar.shape} vs weights {w.shape}")
    if prog.sigma_prog > 0 and rng is None:
        raise ParameterError("program_weights: noisy programming needs an rng")

    w_max = float(np.max(np.abs(w))) if w.size else 0.0
    if w_max == 0.0:
        w_max = 1.0

    scaled = w * (g_max / w_max)
    target_plus = np.where(w >= 0, scaled, 0.0)
    target_minus = np.where(w < 0, -scaled, 0.0)

    g_plus, g_minus, attempts = _write_and_verify(
        (target_plus, target_minus), g_max, prog, rng  # type: ignore[arg-type]
    )

    previous = (
        crossbar.write_counts if crossbar is not None else np.zeros(w.shape, dtype=np.int64)
    )
    return Crossbar(
        g_plus=g_plus,
        g_minus=g_minus,
        g_max=float(g_max),
        w_max=w_max,
        write_counts=previous + attempts,
        target_g_plus=target_plus,
        target_g_minus=target_minus,
    )


def apply_drift(cb: Crossbar, spec: DriftSpec, rng: RngStream) -> Crossbar:
    """Apply one relative drift event; write counters are untouched

    Each device with target G_t > 0 is set to G_t + N(mu_rel·G_t, (rho·G_t)²), clipped to
    [0, g_max], so any programming error is replaced by the drift. With ``spec.accumulate``
    the noise is added to the current conductance instead, keeping the programming error
    and compounding repeated drift events. Devices targeting 0 keep their state, and a
    zero event (rho = mu_rel = 0) leaves the crossbar unchanged.
    """
    drifted = cb.copy()
    for current, target, name in (
        (drifted.g_plus, cb.target_g_plus, "plus"),
        (drifted.g_minus, cb.target_g_minus, "minus"),
    ):
        live = target > 0
        count = int(live.sum())
        if count == 0 or (spec.rho == 0 and spec.mu_rel == 0):
            continue
        g_t = target[live]
        z = gaussian(rng, 0.0, 1.0, (count,))
        base = current[live] if spec.accumulate else g_t
        current[live] = np.clip(base + spec.mu_rel * g_t + spec.rho * g_t * z, 0.0, cb.g_max)
        logger.debug(f"apply_drift: drifted {count} {name} devices at rho={spec.rho}")
    return drifted


def read_effective_weights(cb: Crossbar) -> Tensor:
    """W_r = (G⁺ − G⁻) · W_max / G_max"""
    return (cb.g_plus - cb.g_minus) * (cb.w_max / cb.g_max)


def crossbar_matmul(cb: Crossbar, x: Tensor) -> Tensor:
    """Ideal analog matrix-vector product x · W_r"""
    return matmul(x, read_effective_weights(cb))


def write_stats(cb: Crossbar, endurance: int = RRAM_ENDURANCE) -> WriteStats:
    """Summarize the crossbar's write counters against an endurance limit"""
    counts = cb.write_counts
    return WriteStats(
        total_writes=int(counts.sum()),
        max_cell_writes=int(counts.max()) if counts.size else 0,
        cells_at_limit=int(np.count_nonzero(counts >= endurance)),
    )
