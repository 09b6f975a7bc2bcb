"""Figure rendering for evaluation reports."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .evalbench import AXES, EvalReport


def render_figures(report: EvalReport, outdir: str) -> list[str]:
    """One bar chart per grouping axis; returns the written file paths."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    for axis, columns in AXES.items():
        groups = report.groups[axis]
        labels = [c for c in columns if groups[c].count]
        if not labels:
            continue
        means = [groups[c].mean for c in labels]
        counts = [groups[c].count for c in labels]
        fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(labels)), 3.2))
        bars = ax.bar(range(len(labels)), means, color="#4878a8")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel("normalized edit distance")
        ax.set_title(f"{axis} (n per group)")
        ax.set_ylim(0, max(0.05, max(means) * 1.25))
        for bar, n in zip(bars, counts):
            ax.annotate(
                str(n),
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=7,
            )
        fig.tight_layout()
        path = os.path.join(outdir, f"{axis}.png")
        # drop the Software text chunk so runs are byte-reproducible
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        written.append(path)
    return written
