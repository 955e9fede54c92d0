import pytest

from fragsleuth.corpus import (
    build_chunk_index,
    build_manifest,
    generate_corpus,
    resolve_tools,
    write_chunk_index,
    write_manifest,
)

SEED = "1.3035772690"
TOOLS = ["gzip", "bzip2", "compress", "lz4"]


class Corpus:
    def __init__(self, root, docs, manifest, index):
        self.root = root
        self.docs = docs
        self.manifest = manifest
        self.index = index
        self.out = root / "out"
        self.index_path = self.out / "chunks.tsv"
        self.manifest_path = self.out / "manifest.tsv"


def build_corpus_tree(root, doc_count, min_kb, max_kb, tools=None, skip_first=False):
    docs = generate_corpus(root / "src", doc_count, seed=SEED, min_kb=min_kb, max_kb=max_kb)
    specs, skipped = resolve_tools(tools or TOOLS)
    assert not skipped, f"expected builtin adapters for {tools or TOOLS}, skipped: {skipped}"
    manifest, errors = build_manifest(docs, specs, root / "work", root / "out", SEED)
    assert not errors
    write_manifest(manifest, root / "out" / "manifest.tsv")
    index = build_chunk_index(manifest, skip_first=skip_first)
    write_chunk_index(index, root / "out" / "chunks.tsv", SEED)
    return Corpus(root, docs, manifest, index)


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    """Small shared corpus: 4 tools, a few hundred chunks."""
    return build_corpus_tree(tmp_path_factory.mktemp("tiny"), doc_count=6, min_kb=48, max_kb=160)


@pytest.fixture(scope="session")
def desk_corpus(tmp_path_factory):
    """Desk-scale corpus for the heavy end-to-end checks: >= 2500 chunks per tool."""
    corpus = build_corpus_tree(
        tmp_path_factory.mktemp("desk"), doc_count=24, min_kb=640, max_kb=1280
    )
    per_class = {}
    for rec in corpus.index:
        per_class[rec.label] = per_class.get(rec.label, 0) + 1
    assert all(n >= 2500 for n in per_class.values()), f"desk corpus too small: {per_class}"
    return corpus
