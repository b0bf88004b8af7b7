"""Deterministic SVG figures from attack results."""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import EmptyInput  # noqa: E402

METRIC_LABELS = {"L": "average shortest path length L", "C": "average clustering C", "D": "diagonal distance D"}


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _save(fig, path):
    with plt.rc_context({"svg.hashsalt": "sfattack", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def violin_plots(rows, out):
    by_metric = defaultdict(lambda: defaultdict(list))
    for r in rows:
        by_metric[r["metric"]][(r.get("strategy") or "", r["phase"])].append(float(r["value"]))
    written = []
    for metric in sorted(by_metric):
        groups = by_metric[metric]
        strategies = sorted({s for s, _ in groups})
        fig, ax = plt.subplots(figsize=(2.2 + 1.6 * len(strategies), 3.6))
        positions, data, colors = [], [], []
        for i, s in enumerate(strategies):
            for j, phase in enumerate(("before", "after")):
                vals = groups.get((s, phase))
                if vals:
                    positions.append(3 * i + j)
                    data.append(vals)
                    colors.append("#4c72b0" if phase == "before" else "#dd8452")
        parts = ax.violinplot(data, positions=positions, showmedians=True, widths=0.8)
        for body, color in zip(parts["bodies"], colors):
            body.set_facecolor(color)
            body.set_alpha(0.7)
        ax.set_xticks([3 * i + 0.5 for i in range(len(strategies))])
        ax.set_xticklabels([s or "all" for s in strategies])
        ax.set_ylabel(METRIC_LABELS.get(metric, metric))
        ax.set_title(f"{metric}: before (blue) / after (orange)")
        fig.tight_layout()
        path = Path(out) / f"violin_{metric}.svg"
        _save(fig, path)
        written.append(path)
    return written


def degree_plot(rows, out):
    pooled = defaultdict(lambda: defaultdict(int))
    for r in rows:
        label = "original" if r["phase"] == "before" else r["strategy"]
        pooled[label][int(r["degree"])] += int(r["count"])
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    for label in sorted(pooled):
        hist = pooled[label]
        k = np.array(sorted(d for d in hist if d > 0))
        c = np.array([hist[d] for d in k], dtype=float)
        ccdf = c[::-1].cumsum()[::-1] / c.sum()
        ax.loglog(k, ccdf, marker=".", linestyle="-", label=label)
    ax.set_xlabel("degree k")
    ax.set_ylabel("P(K >= k)")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(out) / "degree_distribution.svg"
    _save(fig, path)
    return path


def cmd_plot(results_dir, out=None):
    """Render ``violin_{L,C,D}.svg`` (and ``degree_distribution.svg`` when
    ``degrees.csv`` exists) from a results directory."""
    results_dir = Path(results_dir)
    out = Path(out) if out else results_dir
    violins = results_dir / "violins.csv"
    if not violins.exists():
        raise EmptyInput(f"no violins.csv in {results_dir}")
    rows = _read_csv(violins)
    if not rows:
        raise EmptyInput("violins.csv has no samples")
    out.mkdir(parents=True, exist_ok=True)
    written = violin_plots(rows, out)
    degrees = results_dir / "degrees.csv"
    if degrees.exists():
        drows = _read_csv(degrees)
        if drows:
            written.append(degree_plot(drows, out))
    return written
