"""Rendered figures accompanying the delimited reports.

The CSVs are the contract; these PNGs are the human-facing view of the
same data: per-tool pass-rate bars, the training accuracy curve, a
row-normalized confusion-matrix heatmap, and a gallery grid of fragment
images with predicted/true labels.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import ConfusionMatrix


def render_pass_rates(rates: dict[str, float], path: Path) -> Path:
    tools = sorted(rates, key=lambda t: rates[t])
    values = [100.0 * rates[t] for t in tools]
    fig, ax = plt.subplots(figsize=(7, 4))
    bars = ax.bar(tools, values, color="#4878a8")
    ax.bar_label(bars, fmt="%.0f%%")
    ax.set_ylabel("pass rate (% of chunk-test pairs)")
    ax.set_ylim(0, 100)
    ax.set_title("Randomness-test pass rate per compression tool")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_epoch_accuracy(log, path: Path) -> Path:
    epochs = [s.epoch for s in log]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(epochs, [s.train_acc for s in log], marker="o", label="train")
    ax.plot(epochs, [s.val_acc for s in log], marker="s", label="validation")
    ax.set_xlabel("epoch")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0, 1)
    ax.legend()
    ax.set_title("Accuracy per epoch")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_confusion(cm: ConfusionMatrix, path: Path) -> Path:
    pct = cm.percentages()
    k = len(cm.class_names)
    fig, ax = plt.subplots(figsize=(1.1 * k + 2.5, 1.1 * k + 2))
    shown = np.nan_to_num(pct, nan=0.0)
    im = ax.imshow(shown, cmap="Blues", vmin=0, vmax=100)
    ax.set_xticks(range(k), cm.class_names, rotation=45, ha="right")
    ax.set_yticks(range(k), cm.class_names)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    for i in range(k):
        for j in range(k):
            if pct[i, j] == pct[i, j]:
                color = "white" if shown[i, j] > 50 else "black"
                ax.text(j, i, f"{pct[i, j]:.0f}", ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, label="% of true class")
    ax.set_title("Confusion matrix")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_gallery(images: np.ndarray, predicted, confidence, true_labels, path: Path) -> Path:
    """5x5 grid of fragment images titled with prediction vs truth."""
    n = min(25, len(predicted))
    fig, axes = plt.subplots(5, 5, figsize=(11, 12))
    for i, ax in enumerate(axes.flat):
        ax.set_axis_off()
        if i >= n:
            continue
        ax.imshow(images[i].reshape(64, 64), cmap="gray", vmin=0, vmax=1)
        ok = predicted[i] == true_labels[i]
        ax.set_title(
            f"{predicted[i]} {100 * confidence[i]:.0f}%\n(true: {true_labels[i]})",
            fontsize=8,
            color="darkgreen" if ok else "darkred",
        )
    fig.suptitle("Predicted samples")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
