"""Evaluation report files.

All delimited outputs are deterministic for fixed inputs:

  confusion.csv       integer counts, class names on the first row/column
  confusion_pct.csv   row-normalized, 2 decimals; empty cells for absent classes
  per_class.csv       class,count,recall (recall empty when undefined)
  gallery.csv         index,predicted,confidence,true for the first 25 samples
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .metrics import ConfusionMatrix, EvalResult

GALLERY_SIZE = 25


@dataclass(frozen=True)
class GalleryRow:
    index: int
    predicted: str
    confidence: float
    true_label: str


def gallery_rows(result: EvalResult, limit: int = GALLERY_SIZE) -> list[GalleryRow]:
    """First ``limit`` evaluated samples in index order, no padding."""
    n = min(limit, len(result.predicted))
    return [
        GalleryRow(i, result.predicted[i], float(result.confidence[i]), result.true_labels[i])
        for i in range(n)
    ]


def confusion_csv(cm: ConfusionMatrix, seed: str) -> str:
    lines = [f"# fragsleuth-confusion v1 seed={seed}"]
    lines.append(",".join(["class"] + cm.class_names))
    for i, name in enumerate(cm.class_names):
        lines.append(",".join([name] + [str(int(v)) for v in cm.counts[i]]))
    return "\n".join(lines) + "\n"


def confusion_pct_csv(cm: ConfusionMatrix, seed: str) -> str:
    pct = cm.percentages()
    lines = [f"# fragsleuth-confusion-pct v1 seed={seed}"]
    lines.append(",".join(["class"] + cm.class_names))
    for i, name in enumerate(cm.class_names):
        row = ["" if v != v else f"{v:.2f}" for v in pct[i]]  # NaN -> empty
        lines.append(",".join([name] + row))
    return "\n".join(lines) + "\n"


def per_class_csv(result: EvalResult, seed: str) -> str:
    cm = result.confusion
    lines = [f"# fragsleuth-per-class v1 seed={seed}", "class,count,recall"]
    sums = cm.row_sums()
    for i, name in enumerate(cm.class_names):
        recall = result.recalls[name]
        recall_text = "" if recall is None else f"{recall:.6f}"
        lines.append(f"{name},{int(sums[i])},{recall_text}")
    return "\n".join(lines) + "\n"


def gallery_csv(rows: list[GalleryRow], seed: str) -> str:
    lines = [f"# fragsleuth-gallery v1 seed={seed}", "index,predicted,confidence,true"]
    for r in rows:
        lines.append(f"{r.index},{r.predicted},{r.confidence:.6f},{r.true_label}")
    return "\n".join(lines) + "\n"


def emit_reports(result: EvalResult, out_dir: Path, seed: str) -> dict[str, Path]:
    """Write the four delimited reports; returns name -> path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "confusion": (out_dir / "confusion.csv", confusion_csv(result.confusion, seed)),
        "confusion_pct": (out_dir / "confusion_pct.csv", confusion_pct_csv(result.confusion, seed)),
        "per_class": (out_dir / "per_class.csv", per_class_csv(result, seed)),
        "gallery": (out_dir / "gallery.csv", gallery_csv(gallery_rows(result), seed)),
    }
    out = {}
    for name, (path, text) in files.items():
        path.write_text(text, encoding="utf-8")
        out[name] = path
    return out
