"""Fixed-size fragments and the chunk index over compressed outputs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import BadLength
from .manifest import DatasetManifest

FRAGMENT_SIZE = 4096

_INDEX_MAGIC = "fragsleuth-chunk-index v1"


@dataclass(frozen=True)
class Fragment:
    """One labeled 4096-byte slice of a compressed file."""

    data: bytes
    label: str
    origin: tuple[str, int]  # (compressed path, chunk ordinal)

    def __post_init__(self):
        if len(self.data) != FRAGMENT_SIZE:
            raise BadLength(f"fragment must be {FRAGMENT_SIZE} bytes, got {len(self.data)}")


@dataclass(frozen=True)
class ChunkRecord:
    path: str  # relative POSIX path of the compressed file
    ordinal: int
    offset: int
    label: str


def chunk_compressed(path: Path, label: str, rel_path: str | None = None) -> list[Fragment]:
    """Split a compressed file into full fragments; the tail remainder is dropped."""
    data = Path(path).read_bytes()
    rel = rel_path if rel_path is not None else str(path)
    count = len(data) // FRAGMENT_SIZE
    return [
        Fragment(data[i * FRAGMENT_SIZE : (i + 1) * FRAGMENT_SIZE], label, (rel, i))
        for i in range(count)
    ]


def build_chunk_index(manifest: DatasetManifest, skip_first: bool = False) -> list[ChunkRecord]:
    """Expand manifest entries into per-chunk records.

    ``skip_first`` drops chunk 0 of every file, excluding container
    headers and magic numbers from downstream sampling.
    """
    records = []
    for entry in manifest.entries:
        start = 1 if skip_first else 0
        for i in range(start, entry.chunk_count):
            records.append(
                ChunkRecord(entry.compressed_path, i, i * FRAGMENT_SIZE, entry.tool_id)
            )
    return records


def write_chunk_index(records: list[ChunkRecord], path: Path, seed: str) -> None:
    lines = [f"# {_INDEX_MAGIC} seed={seed}"]
    for r in records:
        lines.append(f"{r.path}\t{r.ordinal}\t{r.offset}\t{r.label}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_chunk_index(path: Path) -> list[ChunkRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        p, ordinal, offset, label = line.split("\t")
        records.append(ChunkRecord(p, int(ordinal), int(offset), label))
    return records


def read_fragment(root: Path, record: ChunkRecord) -> Fragment:
    """Load one fragment by seeking into its compressed file under ``root``."""
    with open(Path(root) / record.path, "rb") as f:
        f.seek(record.offset)
        data = f.read(FRAGMENT_SIZE)
    if len(data) != FRAGMENT_SIZE:
        raise BadLength(
            f"{record.path}:{record.ordinal} is truncated ({len(data)} bytes at offset {record.offset})"
        )
    return Fragment(data, record.label, (record.path, record.ordinal))
