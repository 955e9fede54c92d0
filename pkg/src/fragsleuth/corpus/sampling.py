"""Seeded, class-balanced sampling of chunk records.

Selection is a pure function of (index, seed, per_class_count): each
class's records are put in a canonical (path, ordinal) order, shuffled
with a Fisher-Yates pass driven by that class's derived SplitMix64
stream, and the first ``per_class_count`` taken.  Deriving one stream
per class keeps a class's selection independent of which other classes
happen to be present.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InsufficientSamples
from ..seeding import rng_for
from .chunks import ChunkRecord

DEFAULT_SEED = "1.3035772690"


@dataclass(frozen=True)
class SamplerConfig:
    seed: str = DEFAULT_SEED
    per_class_count: int = 10

    def __post_init__(self):
        if not self.seed:
            raise ValueError("sampler seed must be nonempty")
        if self.per_class_count < 1:
            raise ValueError("per_class_count must be >= 1")


def sample_chunks(index: list[ChunkRecord], cfg: SamplerConfig) -> list[ChunkRecord]:
    """Exactly ``per_class_count`` records per class, no duplicates."""
    by_label: dict[str, list[ChunkRecord]] = {}
    for rec in index:
        by_label.setdefault(rec.label, []).append(rec)

    selected: list[ChunkRecord] = []
    for label in sorted(by_label):
        records = sorted(by_label[label], key=lambda r: (r.path, r.ordinal))
        if len(records) < cfg.per_class_count:
            raise InsufficientSamples(label, len(records), cfg.per_class_count)
        rng_for(cfg.seed, "sample", label).shuffle(records)
        selected.extend(records[: cfg.per_class_count])
    return selected
