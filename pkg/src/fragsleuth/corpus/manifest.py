"""Dataset manifest: the seed-stamped record of how a corpus was built.

Line-oriented text format, UTF-8 with LF endings:

    fragsleuth-manifest v1 seed=<seed>
    <source_id> TAB <tool_id> TAB <tool_version> TAB <compressed_path> TAB <size> TAB <chunk_count>

Entries are sorted by (tool_id, source_id) and paths are stored
relative to the corpus root with forward slashes, so a rebuild from
identical inputs reproduces the file byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FragsleuthError
from .compressors import CompressorSpec, compress_document
from .documents import SourceDocument

MANIFEST_MAGIC = "fragsleuth-manifest v1"
_FRAGMENT = 4096


@dataclass(frozen=True)
class ManifestEntry:
    source_id: str
    tool_id: str
    tool_version: str
    compressed_path: str
    compressed_size: int
    chunk_count: int

    def __post_init__(self):
        if self.chunk_count != self.compressed_size // _FRAGMENT:
            raise ValueError(
                f"chunk_count {self.chunk_count} inconsistent with size {self.compressed_size}"
            )
        for text in (self.source_id, self.tool_id, self.tool_version, self.compressed_path):
            if "\t" in text or "\n" in text:
                raise ValueError(f"manifest field may not contain tabs or newlines: {text!r}")


@dataclass
class DatasetManifest:
    seed: str
    entries: list[ManifestEntry] = field(default_factory=list)
    format_version: int = 1


def build_manifest(
    docs: list[SourceDocument],
    specs: list[CompressorSpec],
    workdir: Path,
    out_dir: Path,
    seed: str,
) -> tuple[DatasetManifest, list[tuple[str, str, str]]]:
    """Compress every (doc, tool) pair and assemble the manifest.

    Per-entry adapter failures are collected as (source_id, tool_id,
    message) and do not abort the rest of the build.
    """
    out_dir = Path(out_dir)
    entries: list[ManifestEntry] = []
    errors: list[tuple[str, str, str]] = []
    for spec in specs:
        for doc in docs:
            try:
                path, size = compress_document(doc, spec, workdir, out_dir)
            except FragsleuthError as exc:
                errors.append((doc.id, spec.tool_id, str(exc)))
                continue
            entries.append(
                ManifestEntry(
                    source_id=doc.id,
                    tool_id=spec.tool_id,
                    tool_version=spec.version,
                    compressed_path=path.relative_to(out_dir).as_posix(),
                    compressed_size=size,
                    chunk_count=size // _FRAGMENT,
                )
            )
    entries.sort(key=lambda e: (e.tool_id, e.source_id))
    return DatasetManifest(seed=seed, entries=entries), errors


def serialize_manifest(manifest: DatasetManifest) -> str:
    lines = [f"{MANIFEST_MAGIC} seed={manifest.seed}"]
    for e in manifest.entries:
        lines.append(
            f"{e.source_id}\t{e.tool_id}\t{e.tool_version}\t"
            f"{e.compressed_path}\t{e.compressed_size}\t{e.chunk_count}"
        )
    return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> DatasetManifest:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty manifest")
    header = lines[0]
    prefix = f"{MANIFEST_MAGIC} seed="
    if not header.startswith(prefix):
        raise ValueError(f"bad manifest header: {header!r}")
    seed = header[len(prefix):]
    entries = []
    for ln in lines[1:]:
        if not ln:
            continue
        parts = ln.split("\t")
        if len(parts) != 6:
            raise ValueError(f"bad manifest record: {ln!r}")
        entries.append(
            ManifestEntry(parts[0], parts[1], parts[2], parts[3], int(parts[4]), int(parts[5]))
        )
    return DatasetManifest(seed=seed, entries=entries)


def write_manifest(manifest: DatasetManifest, path: Path) -> None:
    Path(path).write_text(serialize_manifest(manifest), encoding="utf-8")


def read_manifest(path: Path) -> DatasetManifest:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))
