from .documents import SourceDocument, discover_documents
from .synthetic import generate_corpus
from .compressors import (
    TOOL_IDS,
    DIRECTORY_TOOLS,
    CompressorSpec,
    resolve_tools,
    compress_document,
)
from .chunks import (
    FRAGMENT_SIZE,
    Fragment,
    ChunkRecord,
    chunk_compressed,
    build_chunk_index,
    write_chunk_index,
    read_chunk_index,
    read_fragment,
)
from .manifest import ManifestEntry, DatasetManifest, build_manifest, write_manifest, read_manifest
from .sampling import SamplerConfig, sample_chunks

__all__ = [
    "SourceDocument",
    "discover_documents",
    "generate_corpus",
    "TOOL_IDS",
    "DIRECTORY_TOOLS",
    "CompressorSpec",
    "resolve_tools",
    "compress_document",
    "FRAGMENT_SIZE",
    "Fragment",
    "ChunkRecord",
    "chunk_compressed",
    "build_chunk_index",
    "write_chunk_index",
    "read_chunk_index",
    "read_fragment",
    "ManifestEntry",
    "DatasetManifest",
    "build_manifest",
    "write_manifest",
    "read_manifest",
    "SamplerConfig",
    "sample_chunks",
]
