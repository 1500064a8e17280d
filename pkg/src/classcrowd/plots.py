"""Static SVG figures. Output is byte-stable for identical input."""

from __future__ import annotations

import io
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import write_atomic  # noqa: E402
from .metrics import PositivitySeries  # noqa: E402

plt.rcParams["svg.hashsalt"] = "classcrowd"


def _save(fig, path) -> None:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    write_atomic(path, buf.getvalue())


def plot_positivity(series: PositivitySeries, n_characters: int, path) -> None:
    fig, ax = plt.subplots(figsize=(10, 3))
    ax.step(series.times, series.values, where="post", lw=0.8)
    ax.axhline(0, color="grey", lw=0.5)
    ax.set_ylim(-n_characters - 1, n_characters + 1)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("group positivity")
    fig.tight_layout()
    _save(fig, path)


def plot_group_curves(curves: Mapping[str, Sequence[tuple[float, float]]], ylabel: str, path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    for label, pts in curves.items():
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", ms=2, lw=1, label=label)
    ax.set_xlabel("minute")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_groups_box(groups: Mapping[str, Sequence[float]], ylabel: str, path) -> None:
    labels = [k for k, v in groups.items() if len(v)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.boxplot([groups[k] for k in labels])
    ax.set_xticks(range(1, len(labels) + 1), labels, fontsize=8)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    _save(fig, path)


def plot_crosstab(rows: Sequence[tuple[int, float, float]], path) -> None:
    qs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([q - 0.2 for q in qs], [100 * r[1] for r in rows], width=0.4, label="correct [%]")
    ax.bar([q + 0.2 for q in qs], [100 * r[2] for r in rows], width=0.4, label="took key notes [%]")
    ax.set_xticks(qs)
    ax.set_xlabel("question")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
