"""Experiment scenarios: config parsing, execution, and file outputs.

A scenario is a named family of (aperture, modulation) curves simulated over
a shared SNR grid. The three built-in families mirror the validation studies
this toolkit reproduces:

* ``fig2``  - BPSK, W=1, N in {1..5}; N=1 is the fixed-port baseline.
* ``fig3``  - BPSK, W=1, N in {3, 6, 11} (port spacings 0.5, 0.2, 0.1).
* ``fig4``  - N=3, W=1; PSK/QAM/PAM order ladders.
* ``custom``- one curve, fully specified by the config.

A run writes, per scenario: a results CSV (one row per curve and SNR point),
a plot-data CSV (snr_db plus one mc and one asymptotic column per curve),
a rendered figure, and a JSON run manifest.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import yaml

from . import __version__
from .asymptotics import AsymptoticPrediction, predict
from .modulation import ModulationSpec, params_of
from .monte_carlo import ESTIMATORS, SerEstimate, SimulationConfig, estimate_ser
from .spatial_channel import ApertureConfig, build_jakes_model

__all__ = [
    "CurveConfig",
    "ExperimentScenario",
    "ResultRow",
    "CurveResult",
    "CSV_HEADER",
    "SCENARIO_NAMES",
    "parse_config",
    "build_scenario",
    "run_scenario",
]

SCENARIO_NAMES = ("fig2", "fig3", "fig4", "custom")

DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 42
DEFAULT_SNR_GRID_DB = tuple(float(s) for s in range(0, 45, 5))

FIG4_ORDERS = {"psk": (4, 8, 16), "qam": (4, 16, 64), "pam": (2, 4, 8)}

CSV_HEADER = (
    "scenario,N,W,scheme,M,snr_db,mc_ser,mc_stderr,asymptotic_ser,"
    "diversity_gain,coding_gain,trials,seed"
)

_CONFIG_KEYS = {
    "scenario",
    "n_ports",
    "aperture_width",
    "scheme",
    "order",
    "snr_start_db",
    "snr_stop_db",
    "snr_step_db",
    "trials",
    "seed",
    "estimator",
    "out_dir",
}


@dataclass(frozen=True)
class CurveConfig:
    """One curve of a scenario: an aperture geometry plus a modulation."""

    num_ports: int
    aperture_width: float
    spec: ModulationSpec

    @property
    def label(self) -> str:
        return f"n{self.num_ports}_{self.spec.label}"


@dataclass(frozen=True)
class ExperimentScenario:
    name: str
    curves: tuple[CurveConfig, ...]
    snr_grid_db: tuple[float, ...]
    trials: int
    seed: int
    estimator: str
    out_dir: Path
    workers: int = 1


@dataclass(frozen=True)
class ResultRow:
    """One CSV row: one curve at one SNR point."""

    scenario: str
    N: int
    W: float
    scheme: str
    M: int
    snr_db: float
    mc_ser: float
    mc_stderr: float
    asymptotic_ser: float
    diversity_gain: int
    coding_gain: float
    trials: int
    seed: int


@dataclass(frozen=True, eq=False)
class CurveResult:
    curve: CurveConfig
    estimates: tuple[SerEstimate, ...]
    prediction: AsymptoticPrediction


def _snr_grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    if step <= 0:
        raise ValueError(f"snr_step_db must be positive, got {step}")
    if stop < start:
        raise ValueError(f"snr_stop_db {stop} is below snr_start_db {start}")
    grid = []
    s = float(start)
    while s <= stop + 1e-9:
        grid.append(round(s, 10))
        s += step
    return tuple(grid)


def build_scenario(
    name: str,
    out_dir: str | Path,
    *,
    n_ports: int = 4,
    aperture_width: float = 1.0,
    scheme: str = "bpsk",
    order: int = 2,
    snr_grid_db: Iterable[float] = DEFAULT_SNR_GRID_DB,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    estimator: str = "semi_analytic",
    workers: int = 1,
) -> ExperimentScenario:
    """Assemble a validated scenario; sweep parameters of fig2/fig3/fig4 are fixed."""
    if name not in SCENARIO_NAMES:
        raise ValueError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}, got {estimator!r}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    if name == "fig2":
        curves = tuple(
            CurveConfig(n, 1.0, params_of("bpsk", 2)) for n in (1, 2, 3, 4, 5)
        )
    elif name == "fig3":
        curves = tuple(
            CurveConfig(n, 1.0, params_of("bpsk", 2)) for n in (3, 6, 11)
        )
    elif name == "fig4":
        curves = tuple(
            CurveConfig(3, 1.0, params_of(sch, m))
            for sch in ("psk", "qam", "pam")
            for m in FIG4_ORDERS[sch]
        )
    else:
        curves = (CurveConfig(n_ports, aperture_width, params_of(scheme, order)),)

    # constructing the apertures up front surfaces invalid geometry early
    for curve in curves:
        ApertureConfig(curve.num_ports, curve.aperture_width)

    return ExperimentScenario(
        name=name,
        curves=curves,
        snr_grid_db=tuple(float(s) for s in snr_grid_db),
        trials=int(trials),
        seed=int(seed),
        estimator=estimator,
        out_dir=Path(out_dir),
        workers=int(workers),
    )


def parse_config(source: str | Path, *, workers: int = 1) -> ExperimentScenario:
    """Parse a YAML scenario config from a path or literal text.

    Recognized keys: scenario, n_ports, aperture_width, scheme, order,
    snr_start_db, snr_stop_db, snr_step_db, trials, seed, estimator, out_dir.
    Unknown keys are an error.
    """
    if isinstance(source, Path) or (
        "\n" not in str(source) and Path(source).is_file()
    ):
        text = Path(source).read_text()
    else:
        text = str(source)
    raw = yaml.safe_load(text)
    if not isinstance(raw, Mapping):
        raise ValueError("config must be a mapping of keys to values")
    unknown = sorted(set(raw) - _CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")

    name = raw.get("scenario", "custom")
    grid = _snr_grid(
        raw.get("snr_start_db", 0.0),
        raw.get("snr_stop_db", 40.0),
        raw.get("snr_step_db", 5.0),
    )
    return build_scenario(
        name,
        raw.get("out_dir", "."),
        n_ports=int(raw.get("n_ports", 4)),
        aperture_width=float(raw.get("aperture_width", 1.0)),
        scheme=str(raw.get("scheme", "bpsk")),
        order=int(raw.get("order", 2)),
        snr_grid_db=grid,
        trials=int(raw.get("trials", DEFAULT_TRIALS)),
        seed=int(raw.get("seed", DEFAULT_SEED)),
        estimator=str(raw.get("estimator", "semi_analytic")),
        workers=workers,
    )


def simulate_curve(scenario: ExperimentScenario, curve: CurveConfig) -> CurveResult:
    aperture = ApertureConfig(curve.num_ports, curve.aperture_width)
    cfg = SimulationConfig(
        aperture=aperture,
        spec=curve.spec,
        snr_grid_db=scenario.snr_grid_db,
        trials=scenario.trials,
        master_seed=scenario.seed,
        estimator=scenario.estimator,
        workers=scenario.workers,
    )
    estimates = tuple(estimate_ser(cfg))
    model = build_jakes_model(aperture)
    prediction = predict(curve.spec, model, scenario.snr_grid_db)
    return CurveResult(curve=curve, estimates=estimates, prediction=prediction)


def result_rows(scenario: ExperimentScenario, results: Iterable[CurveResult]):
    rows = []
    for res in results:
        for est, asym in zip(res.estimates, res.prediction.ser):
            rows.append(
                ResultRow(
                    scenario=scenario.name,
                    N=res.curve.num_ports,
                    W=res.curve.aperture_width,
                    scheme=res.curve.spec.scheme,
                    M=res.curve.spec.order,
                    snr_db=est.snr_db,
                    mc_ser=est.ser_mean,
                    mc_stderr=est.ser_stderr,
                    asymptotic_ser=asym,
                    diversity_gain=res.prediction.diversity_gain,
                    coding_gain=res.prediction.coding_gain,
                    trials=est.trials,
                    seed=scenario.seed,
                )
            )
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_results_csv(path: Path, rows: Iterable[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        for row in rows:
            writer.writerow(
                [
                    row.scenario, row.N, _fmt(row.W), row.scheme, row.M,
                    _fmt(row.snr_db), _fmt(row.mc_ser), _fmt(row.mc_stderr),
                    _fmt(row.asymptotic_ser), row.diversity_gain,
                    _fmt(row.coding_gain), row.trials, row.seed,
                ]
            )


def read_results_csv(path: Path) -> list[ResultRow]:
    """Inverse of :func:`write_results_csv`; exact for 17-digit floats."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ResultRow(
                    scenario=rec["scenario"],
                    N=int(rec["N"]),
                    W=float(rec["W"]),
                    scheme=rec["scheme"],
                    M=int(rec["M"]),
                    snr_db=float(rec["snr_db"]),
                    mc_ser=float(rec["mc_ser"]),
                    mc_stderr=float(rec["mc_stderr"]),
                    asymptotic_ser=float(rec["asymptotic_ser"]),
                    diversity_gain=int(rec["diversity_gain"]),
                    coding_gain=float(rec["coding_gain"]),
                    trials=int(rec["trials"]),
                    seed=int(rec["seed"]),
                )
            )
    return rows


def write_plot_data(path: Path, scenario: ExperimentScenario,
                    results: Iterable[CurveResult]) -> None:
    results = list(results)
    header = ["snr_db"]
    for res in results:
        header += [f"mc_{res.curve.label}", f"asym_{res.curve.label}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, snr_db in enumerate(scenario.snr_grid_db):
            row = [_fmt(snr_db)]
            for res in results:
                row += [_fmt(res.estimates[i].ser_mean), _fmt(res.prediction.ser[i])]
            writer.writerow(row)


def run_scenario(scenario: ExperimentScenario) -> dict[str, Path]:
    """Simulate every curve of ``scenario`` and write all output files.

    Returns the paths of the written files, keyed by artifact kind.
    Raises OSError for unwritable output locations and ArithmeticError /
    FloatingPointError-style failures propagate to the caller.
    """
    from .plotting import render_scenario_figure

    t0 = time.perf_counter()
    out = scenario.out_dir
    out.mkdir(parents=True, exist_ok=True)

    results = [simulate_curve(scenario, curve) for curve in scenario.curves]
    rows = result_rows(scenario, results)

    paths = {
        "results": out / f"{scenario.name}_results.csv",
        "plot_data": out / f"{scenario.name}_plotdata.csv",
        "figure": out / f"{scenario.name}.png",
        "manifest": out / f"{scenario.name}_manifest.json",
    }
    write_results_csv(paths["results"], rows)
    write_plot_data(paths["plot_data"], scenario, results)
    render_scenario_figure(paths["figure"], scenario, results)

    manifest = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "trials": scenario.trials,
        "estimator": scenario.estimator,
        "workers": scenario.workers,
        "toolkit_version": __version__,
        "wall_time_s": time.perf_counter() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    paths["manifest"].write_text(json.dumps(manifest, indent=2) + "\n")
    return paths
