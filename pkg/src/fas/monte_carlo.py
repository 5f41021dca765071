"""Deterministic, parallel Monte Carlo SER estimation over an SNR grid.

Trials are split into fixed-size chunks. Each chunk owns a counter-based
RNG substream keyed by (master_seed, chunk_index), so the draw sequence is
independent of the worker count, and partial sums are reduced in chunk
order, so the floating-point result is bit-identical for 1 or 64 workers.

Within a trial the same channel draw feeds every SNR grid point (common
random numbers): curves come out smooth and exactly monotone in SNR.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .modulation import ModulationSpec, build_constellation
from .spatial_channel import (
    ApertureConfig,
    DEFAULT_RANK_THRESHOLD,
    build_jakes_model,
    channel_transform,
)

__all__ = [
    "CHUNK_TRIALS",
    "ESTIMATORS",
    "SimulationConfig",
    "SerEstimate",
    "derive_stream",
    "estimate_ser",
]

# Fixed chunk granularity: results must not depend on the worker count,
# so the partition is a constant of the engine, not of the schedule.
CHUNK_TRIALS = 1 << 17

ESTIMATORS = ("semi_analytic", "symbol_level")

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationConfig:
    """Everything one SER-vs-SNR run needs, including its master seed."""

    aperture: ApertureConfig
    spec: ModulationSpec
    snr_grid_db: tuple[float, ...]
    trials: int
    master_seed: int = 42
    estimator: str = "semi_analytic"
    workers: int = 1
    rank_threshold: float = DEFAULT_RANK_THRESHOLD

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.snr_grid_db) == 0:
            raise ValueError("snr_grid_db must be nonempty")
        if any(b <= a for a, b in zip(self.snr_grid_db, self.snr_grid_db[1:])):
            raise ValueError("snr_grid_db must be strictly increasing")
        if self.estimator not in ESTIMATORS:
            raise ValueError(
                f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class SerEstimate:
    """Monte Carlo SER at one SNR point, with its standard error."""

    snr_db: float
    ser_mean: float
    ser_stderr: float
    trials: int


def derive_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible substream for one trial chunk.

    Counter-based (Philox) keyed by the 128-bit concatenation of the two
    indices; identical inputs give identical streams on every platform.
    """
    key = (int(master_seed) & _SEED_MASK) | ((int(trial_index) & _SEED_MASK) << 64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class _ChunkTask:
    """Picklable per-chunk work description shared by all chunks of a run."""

    transform: np.ndarray
    p: float
    k: float
    order: int
    points: np.ndarray
    snr_linear: np.ndarray
    estimator: str
    master_seed: int
    num_ports: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "num_ports", self.transform.shape[0])


def _chunk_gains(task: _ChunkTask, rng: np.random.Generator, count: int) -> np.ndarray:
    n = task.num_ports
    z = rng.standard_normal((count, 2 * n))
    z = (z[:, :n] + 1j * z[:, n:]) * math.sqrt(0.5)
    h = z @ task.transform.T
    return np.abs(h).max(axis=1)


def _run_chunk(task: _ChunkTask, chunk_index: int, count: int) -> np.ndarray:
    """One chunk's partial statistics.

    Semi-analytic: rows (sum of conditional SER, sum of its squares) per SNR
    point. Symbol-level: row of error counts per SNR point.
    """
    rng = derive_stream(task.master_seed, chunk_index)
    gains = _chunk_gains(task, rng, count)

    if task.estimator == "semi_analytic":
        from scipy.special import erfc

        x = gains**2
        out = np.empty((2, task.snr_linear.size))
        for i, snr in enumerate(task.snr_linear):
            ser = task.p * 0.5 * erfc(np.sqrt((task.k * snr * 0.5) * x))
            out[0, i] = ser.sum()
            out[1, i] = np.square(ser).sum()
        return out

    # symbol_level: one random symbol per trial through the best port at
    # amplitude sqrt(snr) * gain, unit-variance complex AWGN, min-distance
    # detection; channel, symbol, and noise are shared across the grid.
    symbols = rng.integers(0, task.order, size=count)
    w = rng.standard_normal((count, 2)) * math.sqrt(0.5)
    noise = w[:, 0] + 1j * w[:, 1]
    tx = task.points[symbols]
    counts = np.empty((1, task.snr_linear.size))
    for i, snr in enumerate(task.snr_linear):
        amp = math.sqrt(snr) * gains
        y = amp * tx + noise
        dist = np.abs(y[:, None] - amp[:, None] * task.points[None, :])
        decided = np.argmin(dist, axis=1)
        counts[0, i] = np.count_nonzero(decided != symbols)
    return counts


def _make_task(cfg: SimulationConfig) -> _ChunkTask:
    model = build_jakes_model(cfg.aperture, cfg.rank_threshold)
    transform = channel_transform(model, cfg.aperture)
    points = build_constellation(cfg.spec).points
    snr_linear = np.array([10.0 ** (s / 10.0) for s in cfg.snr_grid_db])
    return _ChunkTask(
        transform=transform,
        p=cfg.spec.p,
        k=cfg.spec.k,
        order=cfg.spec.order,
        points=points,
        snr_linear=snr_linear,
        estimator=cfg.estimator,
        master_seed=cfg.master_seed,
    )


def _chunk_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, CHUNK_TRIALS)
    return [CHUNK_TRIALS] * full + ([rest] if rest else [])


def estimate_ser(cfg: SimulationConfig) -> list[SerEstimate]:
    """Estimate the SER at every SNR grid point of ``cfg``.

    Bit-reproducible for a fixed (master_seed, trials) regardless of
    ``workers``; chunk partials are accumulated in chunk-index order.
    """
    task = _make_task(cfg)
    sizes = _chunk_sizes(cfg.trials)

    if cfg.workers == 1 or len(sizes) == 1:
        partials = [_run_chunk(task, idx, n) for idx, n in enumerate(sizes)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            partials = list(
                pool.map(_run_chunk, [task] * len(sizes), range(len(sizes)), sizes,
                         chunksize=max(1, len(sizes) // (4 * cfg.workers)))
            )

    total = partials[0].copy()
    for part in partials[1:]:
        total += part

    n = cfg.trials
    estimates = []
    for i, snr_db in enumerate(cfg.snr_grid_db):
        if cfg.estimator == "semi_analytic":
            mean = total[0, i] / n
            if n > 1:
                var = max(total[1, i] - n * mean * mean, 0.0) / (n - 1)
                stderr = math.sqrt(var / n)
            else:
                stderr = 0.0
        else:
            mean = total[0, i] / n
            stderr = math.sqrt(mean * (1.0 - mean) / n)
        estimates.append(
            SerEstimate(snr_db=snr_db, ser_mean=float(mean),
                        ser_stderr=float(stderr), trials=n)
        )
    return estimates
