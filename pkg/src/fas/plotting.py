"""Rendered SER-vs-SNR figures for scenario runs.

Figures complement the CSV outputs; the delimited files remain the
machine-readable contract. Uses the Agg backend so runs work headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_MARKERS = ("o", "s", "^", "v", "d", "p", "*", "X", "<", ">")


def _plot_curves(ax, scenario, results, title):
    snr = scenario.snr_grid_db
    for idx, res in enumerate(results):
        color = f"C{idx % 10}"
        mc = [e.ser_mean for e in res.estimates]
        # zero estimates cannot be drawn on a log axis
        pts = [(s, v) for s, v in zip(snr, mc) if v > 0]
        if pts:
            ax.semilogy(*zip(*pts), marker=_MARKERS[idx % len(_MARKERS)],
                        linestyle="-", color=color,
                        label=f"{res.curve.label} (mc)")
        ax.semilogy(snr, res.prediction.ser, linestyle="--", color=color,
                    label=f"{res.curve.label} (asym)")
    ax.set_xlabel("average SNR per port (dB)")
    ax.set_ylabel("SER")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)


def render_scenario_figure(path: Path, scenario, results: Iterable) -> None:
    """Render one PNG for a scenario: fig4 gets one panel per scheme family."""
    results = list(results)
    if scenario.name == "fig4":
        schemes = []
        for res in results:
            if res.curve.spec.scheme not in schemes:
                schemes.append(res.curve.spec.scheme)
        fig, axes = plt.subplots(1, len(schemes), figsize=(5 * len(schemes), 4),
                                 squeeze=False)
        for ax, scheme in zip(axes[0], schemes):
            group = [r for r in results if r.curve.spec.scheme == scheme]
            _plot_curves(ax, scenario, group, f"{scenario.name}: {scheme}")
    else:
        fig, axes = plt.subplots(figsize=(6, 4.5), squeeze=False)
        _plot_curves(axes[0][0], scenario, results, scenario.name)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
