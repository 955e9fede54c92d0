"""Source documents: the uncompressed inputs a corpus is built from."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class SourceDocument:
    id: str
    path: Path
    size: int

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError(f"document {self.id!r} is empty")


def _sanitize(rel: str) -> str:
    return rel.replace("\\", "/").replace("/", "__")


def discover_documents(root: Path) -> list[SourceDocument]:
    """Walk ``root`` in stable order; one document per regular file.

    Document ids are the relative paths with separators flattened to
    ``__`` so they stay usable as output file stems.  Empty files are
    skipped.
    """
    root = Path(root)
    docs: list[SourceDocument] = []
    seen: set[str] = set()
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        filenames.sort()
        for name in filenames:
            p = Path(dirpath) / name
            if p.is_symlink():
                continue
            size = p.stat().st_size
            if size == 0:
                continue
            doc_id = _sanitize(str(p.relative_to(root)))
            if doc_id in seen:
                raise ValueError(f"document id collision after flattening: {doc_id!r}")
            seen.add(doc_id)
            docs.append(SourceDocument(id=doc_id, path=p, size=size))
    docs.sort(key=lambda d: d.id)
    return docs
