"""Accuracy, per-class recall, and the confusion matrix."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptySet, UnknownLabel
from ..corpus.chunks import ChunkRecord
from ..classifier.model import FragmentClassifier
from ..classifier.training import load_images


@dataclass
class ConfusionMatrix:
    """K x K counts; rows are true classes, columns predicted classes."""

    counts: np.ndarray
    class_names: list[str]

    def __post_init__(self):
        k = len(self.class_names)
        if self.counts.shape != (k, k):
            raise ValueError(f"counts must be ({k},{k}), got {self.counts.shape}")
        if (self.counts < 0).any():
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def recall(self, class_name: str) -> float | None:
        """Diagonal over row sum; None when the class was never evaluated."""
        i = self.class_names.index(class_name)
        row = int(self.counts[i].sum())
        if row == 0:
            return None
        return float(self.counts[i, i]) / row

    def recalls(self) -> dict[str, float | None]:
        return {name: self.recall(name) for name in self.class_names}

    def percentages(self) -> np.ndarray:
        """Row-normalized percentages; all-zero rows stay NaN."""
        sums = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(sums > 0, 100.0 * self.counts / sums, np.nan)


@dataclass
class EvalResult:
    accuracy: float
    confusion: ConfusionMatrix
    recalls: dict[str, float | None]
    predicted: list[str]
    confidence: np.ndarray
    true_labels: list[str]


def confusion_from_predictions(
    true_labels: list[str], predicted: list[str], class_names: list[str]
) -> ConfusionMatrix:
    index = {name: i for i, name in enumerate(class_names)}
    counts = np.zeros((len(class_names), len(class_names)), dtype=np.int64)
    for t, p in zip(true_labels, predicted):
        if t not in index:
            raise UnknownLabel(f"true label {t!r} not in class table {class_names}")
        if p not in index:
            raise UnknownLabel(f"predicted label {p!r} not in class table {class_names}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts, list(class_names))


def evaluate(model: FragmentClassifier, records: list[ChunkRecord], root: Path) -> EvalResult:
    """Run the model over labeled chunks; order of ``records`` is preserved."""
    if not records:
        raise EmptySet("evaluation needs at least one chunk")
    model.require_classes([r.label for r in records])
    images = load_images(root, records)
    _probs, predicted, confidence = model.predict(images)
    true_labels = [r.label for r in records]
    cm = confusion_from_predictions(true_labels, predicted, model.class_names)
    return EvalResult(
        accuracy=cm.accuracy,
        confusion=cm,
        recalls=cm.recalls(),
        predicted=predicted,
        confidence=confidence,
        true_labels=true_labels,
    )
