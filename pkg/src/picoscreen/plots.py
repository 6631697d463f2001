"""Figure rendering for the report-producing CLI paths.

Every figure lands next to its delimited data file so reports stay
self-contained and diffable.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .embedding_study import EmbeddingStudy
from .labels import PIO
from .metrics import ThresholdSweep

_CLASS_COLORS = {
    "P": "#0072B2",
    "I": "#D55E00",
    "O": "#009E73",
    "A": "#CC79A7",
    "M": "#56B4E9",
    "R": "#E69F00",
    "C": "#999999",
}


def render_sweep_figure(
    sweep: ThresholdSweep, path: str | Path, classes: list[str] | None = None
) -> Path:
    """Per-class precision/recall/F1 against the assignment threshold."""
    wanted = classes or [c.value for c in PIO]
    fig, axes = plt.subplots(1, len(wanted), figsize=(4 * len(wanted), 3.2), sharey=True)
    if len(wanted) == 1:
        axes = [axes]
    for ax, cls in zip(axes, wanted):
        series = {"precision": [], "recall": [], "f1": []}
        for rows in sweep.rows:
            row = next(r for r in rows if r.label == cls)
            series["precision"].append(row.precision)
            series["recall"].append(row.recall)
            series["f1"].append(row.f1)
        for metric, style in (("precision", "--"), ("recall", ":"), ("f1", "-")):
            ax.plot(sweep.thresholds, series[metric], style,
                    color=_CLASS_COLORS.get(cls, "black"), label=metric)
        ax.set_title(cls)
        ax.set_xlabel("threshold")
        ax.set_ylim(0, 1.02)
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("score")
    axes[-1].legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_embedding_figure(study: EmbeddingStudy, path: str | Path) -> Path:
    """t-SNE scatter per layer spec, coloured by gold label."""
    results = [r for r in study.results if r.coords is not None]
    if not results:
        raise ValueError("study carries no 2-D coordinates to plot")
    ncols = min(3, len(results))
    nrows = (len(results) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.6 * nrows), squeeze=False)
    flat = axes.ravel()
    for ax in flat[len(results):]:
        ax.axis("off")
    for ax, result in zip(flat, results):
        for cls in sorted({g.value for g in study.gold}):
            xs = [result.coords[i, 0] for i, g in enumerate(study.gold) if g.value == cls]
            ys = [result.coords[i, 1] for i, g in enumerate(study.gold) if g.value == cls]
            ax.scatter(xs, ys, s=4, alpha=0.5, label=cls, color=_CLASS_COLORS.get(cls))
        ax.set_title(f"layers {result.name}  ARI={result.ari:.2f}")
        ax.set_xticks([])
        ax.set_yticks([])
    flat[0].legend(markerscale=3, fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
