"""Training loop: stratified split, epoch shuffling, best-epoch checkpointing.

The split is per-chunk and stratified by class (a per-file variant is
available for leakage-averse experiments, stricter than the default).
Everything that consumes randomness derives its own stream from the run
seed, and each epoch's batch order comes from ``fold_seed(seed) + epoch``,
so a (data, seed, config) triple reproduces the epoch log byte for byte.

Training aborts early when validation accuracy sits within half a
percentage point of the 1/K random-guess floor for
``early_stop_patience`` consecutive epochs; a model that has collapsed
to guessing gains nothing from further epochs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InsufficientData
from ..seeding import MASK64, SplitMix64, fold_seed, rng_for
from ..corpus.chunks import ChunkRecord, read_fragment
from ..nn.optim import AdamConfig, adam_step
from .checkpoint import CheckpointData, checkpoint_from_model, save_checkpoint
from .encoding import encode_bytes
from .model import FragmentClassifier

DEFAULT_SEED = "1.3035772690"


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    val_fraction: float = 0.1
    seed: str = DEFAULT_SEED
    early_stop_patience: int = 30
    early_stop: bool = True
    per_class: int | None = None  # cap chunks per class before splitting
    split_by_file: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0 < self.val_fraction < 1:
            raise ValueError("val_fraction must be in (0, 1)")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_acc: float
    val_acc: float
    train_loss: float
    val_loss: float


@dataclass
class TrainResult:
    checkpoint: CheckpointData
    epoch_log: list[EpochStats]
    model: FragmentClassifier
    train_records: list[ChunkRecord]
    val_records: list[ChunkRecord]
    stopped_early: bool = False


def stratified_split(
    records: list[ChunkRecord], cfg: TrainConfig
) -> tuple[list[ChunkRecord], list[ChunkRecord]]:
    """Per-class train/validation partition, seeded and deterministic."""
    by_label: dict[str, list[ChunkRecord]] = {}
    for rec in records:
        by_label.setdefault(rec.label, []).append(rec)
    train_recs: list[ChunkRecord] = []
    val_recs: list[ChunkRecord] = []
    for label in sorted(by_label):
        group = sorted(by_label[label], key=lambda r: (r.path, r.ordinal))
        if cfg.per_class is not None:
            if len(group) < cfg.per_class:
                raise InsufficientData(
                    f"class {label!r} has {len(group)} chunks, per_class needs {cfg.per_class}"
                )
            rng_for(cfg.seed, "subset", label).shuffle(group)
            group = group[: cfg.per_class]
            group.sort(key=lambda r: (r.path, r.ordinal))
        if cfg.split_by_file:
            files = sorted({r.path for r in group})
            rng_for(cfg.seed, "split", label).shuffle(files)
            n_val_files = max(1, int(len(files) * cfg.val_fraction))
            val_files = set(files[:n_val_files])
            val_recs += [r for r in group if r.path in val_files]
            train_recs += [r for r in group if r.path not in val_files]
        else:
            rng_for(cfg.seed, "split", label).shuffle(group)
            n_val = int(len(group) * cfg.val_fraction)
            if n_val < 1 or n_val >= len(group):
                raise InsufficientData(
                    f"class {label!r} with {len(group)} chunks cannot honor "
                    f"val_fraction={cfg.val_fraction}"
                )
            val_recs += group[:n_val]
            train_recs += group[n_val:]
    return train_recs, val_recs


def load_images(root: Path, records: list[ChunkRecord], dtype=np.float32) -> np.ndarray:
    """Encode fragments into an (N, 64, 64, 1) image batch."""
    out = np.empty((len(records), 64, 64, 1), dtype=dtype)
    order = sorted(range(len(records)), key=lambda i: (records[i].path, records[i].offset))
    for i in order:  # grouped by file so each compressed file streams once
        frag = read_fragment(root, records[i])
        out[i, :, :, 0] = encode_bytes(frag.data, dtype=dtype)
    return out


def _evaluate_split(model, images, labels, batch_size):
    probs = model.predict_proba(images, batch_size=batch_size)
    picked = probs[np.arange(len(labels)), labels]
    loss = float(-np.log(np.maximum(picked, 1e-300)).mean())
    acc = float((probs.argmax(axis=1) == labels).mean())
    return acc, loss


def train(
    records: list[ChunkRecord],
    root: Path,
    cfg: TrainConfig,
    adam: AdamConfig | None = None,
    checkpoint_path: Path | None = None,
) -> TrainResult:
    """Train on a chunk index; returns the best checkpoint and epoch log."""
    adam = adam or AdamConfig()
    if not records:
        raise InsufficientData("empty chunk index")
    class_names = sorted({r.label for r in records})
    if len(class_names) == 1:
        warnings.warn("single-class dataset: accuracy is trivially 1.0", stacklevel=2)
    label_of = {name: i for i, name in enumerate(class_names)}

    counts: dict[str, int] = {}
    for r in records:
        counts[r.label] = counts.get(r.label, 0) + 1
    lacking = {c: n for c, n in counts.items() if n < cfg.batch_size}
    if lacking:
        raise InsufficientData(f"classes with fewer chunks than one batch: {lacking}")

    train_recs, val_recs = stratified_split(records, cfg)
    x_train = load_images(root, train_recs)
    y_train = np.array([label_of[r.label] for r in train_recs], dtype=np.int64)
    x_val = load_images(root, val_recs)
    y_val = np.array([label_of[r.label] for r in val_recs], dtype=np.int64)

    model = FragmentClassifier.build(class_names, cfg.seed)
    baseline = 1.0 / len(class_names)
    log: list[EpochStats] = []
    best: CheckpointData | None = None
    best_val = -1.0
    flat_epochs = 0
    stopped_early = False

    for epoch in range(1, cfg.epochs + 1):
        order = np.arange(len(train_recs))
        epoch_rng = SplitMix64((fold_seed(cfg.seed) + epoch) & MASK64)
        epoch_rng.shuffle(order)
        total_loss = 0.0
        total_correct = 0
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, probs = model.loss_and_grads(x_train[batch], y_train[batch])
            adam_step(model.params, adam)
            total_loss += loss * len(batch)
            total_correct += int((probs.argmax(axis=1) == y_train[batch]).sum())
        train_loss = total_loss / len(order)
        train_acc = total_correct / len(order)
        val_acc, val_loss = _evaluate_split(model, x_val, y_val, cfg.batch_size * 4)
        log.append(EpochStats(epoch, train_acc, val_acc, train_loss, val_loss))

        if val_acc > best_val:
            best_val = val_acc
            best = checkpoint_from_model(model, epoch, val_acc, cfg.seed)
            if checkpoint_path is not None:
                save_checkpoint(best, checkpoint_path)
        if cfg.early_stop:
            flat_epochs = flat_epochs + 1 if abs(val_acc - baseline) <= 0.005 else 0
            if flat_epochs >= cfg.early_stop_patience:
                stopped_early = True
                break

    assert best is not None
    return TrainResult(best, log, model, train_recs, val_recs, stopped_early)


def write_epoch_log(log: list[EpochStats], path: Path, seed: str) -> None:
    lines = [f"# fragsleuth-epoch-log v1 seed={seed}", "epoch,train_acc,val_acc,train_loss,val_loss"]
    for s in log:
        lines.append(
            f"{s.epoch},{s.train_acc:.6f},{s.val_acc:.6f},{s.train_loss:.6f},{s.val_loss:.6f}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_epoch_log(path: Path) -> list[EpochStats]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#") or line.startswith("epoch,"):
            continue
        e, ta, va, tl, vl = line.split(",")
        rows.append(EpochStats(int(e), float(ta), float(va), float(tl), float(vl)))
    return rows
