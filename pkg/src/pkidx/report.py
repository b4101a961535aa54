"""Figures for ``pkidx stats --figures``; rendered off-screen to PNG files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .heavy import MicroKind  # noqa: E402
from .query import PackedIndex  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_depth_histogram(idx: PackedIndex, path: Path) -> Path:
    tree, hc = idx.tree, idx.heavy.classification
    depth = np.frombuffer(tree.depth, dtype=np.int64)
    internal = np.diff(np.frombuffer(tree.child_ptr, dtype=np.int64)) > 0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        top = int(depth[internal].max()) + 1 if internal.any() else 1
        bins = np.arange(0, top + 1)
        ax.hist([depth[internal & hc.heavy], depth[internal & ~hc.heavy]], bins=bins,
                stacked=True, label=["heavy", "light"], color=["#b2182b", "#999999"])
        alpha = idx.alphabet.alpha
        for d in range(alpha, top, alpha):
            ax.axvline(d, color="k", lw=0.6, ls=":")
        ax.set_xlabel("string depth of internal node")
        ax.set_ylabel("nodes")
        ax.set_title(f"internal nodes by depth (t={idx.heavy.threshold}, alpha={alpha})")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_micro_summary(idx: PackedIndex, path: Path) -> Path:
    hv = idx.heavy
    kinds = [k.name.lower() for k in MicroKind]
    trees = [hv.kind_counts()[k] for k in kinds]
    lg = hv.ledger.as_dict()
    promoted = [lg[k] for k in kinds]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        x = np.arange(len(kinds))
        ax.bar(x - 0.2, trees, 0.4, label="micro trees", color="#4393c3")
        ax.bar(x + 0.2, promoted, 0.4, label="promoted nodes", color="#f4a582")
        ax.set_xticks(x, kinds)
        ax.set_ylabel("count")
        ax.set_title("micro trees and promotions by kind")
        ax.legend(frameon=False)
        return _save(fig, path)


def render_figures(idx: PackedIndex, outdir: str | Path) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        plot_depth_histogram(idx, out / "depth_histogram.png"),
        plot_micro_summary(idx, out / "micro_trees.png"),
    ]
