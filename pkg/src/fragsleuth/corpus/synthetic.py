"""Seeded synthetic document trees for desk-scale runs.

Real corpora (document dumps such as GovDocs1 threads) are consumed via
``discover_documents``; this generator is the bundled substitute so the
whole pipeline runs on one machine.  It mixes five document flavours:
prose, tabular, logs, text with embedded binary blobs, and media-like
files that are mostly high-entropy payload behind light framing.  The
blend matters: document dumps contain plenty of already-compressed
content (images, archives inside PDFs), and that high-entropy share is
what gives each compressor its characteristic output texture.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..seeding import SplitMix64, rng_for
from .documents import SourceDocument

DEFAULT_SEED = "1.3035772690"

_LETTERS = np.frombuffer(b"abcdefghijklmnopqrstuvwxyz", dtype=np.uint8)
_VOCAB_SIZE = 8192
_KINDS = ("text", "text", "text", "csv", "log", "mixed", "mixed", "media", "media")
_SENTENCE_END = (b". ", b". ", b". ", b"? ", b"! ", b"; ")


def _make_vocab(rng: SplitMix64) -> list[bytes]:
    lengths = 2 + (rng.uniform_array(_VOCAB_SIZE) ** 1.5 * 10).astype(np.int64)
    total = int(lengths.sum())
    letters = _LETTERS[(rng.uniform_array(total) * 26).astype(np.int64)]
    words, pos = [], 0
    for n in lengths:
        words.append(letters[pos : pos + n].tobytes())
        pos += n
    return words


def _zipf_cdf(size: int) -> np.ndarray:
    # flattened Zipf keeps per-word entropy near natural prose
    w = 1.0 / (np.arange(size) + 8.0) ** 0.85
    return np.cumsum(w / w.sum())


_CDF = _zipf_cdf(_VOCAB_SIZE)


def _word_indices(rng: SplitMix64, count: int) -> np.ndarray:
    return np.searchsorted(_CDF, rng.uniform_array(count), side="right")


def _text_body(rng: SplitMix64, vocab: list[bytes], target: int) -> bytes:
    n_words = max(32, target // 7)
    idx = _word_indices(rng, n_words)
    specials = rng.uniform_array(n_words)
    numbers = (rng.uniform_array(n_words) * 999983).astype(np.int64)
    sent_len = (5 + rng.uniform_array(n_words // 5 + 1) * 12).astype(np.int64)
    out = []
    pos = 0
    sentence = 0
    for ln in sent_len:
        if pos >= n_words:
            break
        chunk = []
        for j in range(pos, min(pos + int(ln), n_words)):
            s = specials[j]
            if s < 0.04:
                chunk.append(b"%d" % numbers[j])
            elif s < 0.06:
                chunk.append(vocab[idx[j]].capitalize())
            elif s < 0.075:
                chunk.append(vocab[idx[j]] + b",")
            else:
                chunk.append(vocab[idx[j]])
        chunk[0] = chunk[0].capitalize()
        out.append(b" ".join(chunk))
        pos += int(ln)
        sentence += 1
        out.append(b"\n\n" if sentence % 6 == 0 else _SENTENCE_END[int(rng.below(6))])
    return b"".join(out)


def _csv_body(rng: SplitMix64, vocab: list[bytes], target: int) -> bytes:
    rows = max(16, target // 40)
    cats = [vocab[i] for i in _word_indices(rng, 16)]
    cat_idx = (rng.uniform_array(rows) * 16).astype(np.int64)
    ints = (rng.uniform_array(rows) * 10000).astype(np.int64)
    floats = rng.uniform_array(rows) * 1000
    hexes = np.frombuffer(rng.fill_bytes(rows * 4), dtype=np.uint8)
    lines = [b"row_id,category,count,amount,token"]
    for r in range(rows):
        h = hexes[r * 4 : r * 4 + 4].tobytes().hex()
        lines.append(
            b"%d,%s,%d,%.2f,%s" % (r, cats[cat_idx[r]], ints[r], floats[r], h.encode())
        )
    return b"\n".join(lines) + b"\n"


def _log_body(rng: SplitMix64, vocab: list[bytes], target: int) -> bytes:
    rows = max(16, target // 64)
    levels = (b"INFO", b"INFO", b"INFO", b"WARN", b"DEBUG", b"ERROR")
    comps = [vocab[i] for i in _word_indices(rng, 12)]
    lvl_idx = (rng.uniform_array(rows) * len(levels)).astype(np.int64)
    comp_idx = (rng.uniform_array(rows) * len(comps)).astype(np.int64)
    msg_idx = _word_indices(rng, rows * 4)
    ids = np.frombuffer(rng.fill_bytes(rows * 6), dtype=np.uint8)
    t = 1_600_000_000_000 + (rng.uniform_array(rows) * 900).astype(np.int64).cumsum()
    lines = []
    for r in range(rows):
        msg = b" ".join(vocab[i] for i in msg_idx[r * 4 : r * 4 + 4])
        rid = ids[r * 6 : r * 6 + 6].tobytes().hex()
        lines.append(
            b"%d %s %s: %s id=%s" % (t[r], levels[lvl_idx[r]], comps[comp_idx[r]], msg, rid.encode())
        )
    return b"\n".join(lines) + b"\n"


def _mixed_body(rng: SplitMix64, vocab: list[bytes], target: int) -> bytes:
    # alternating prose and opaque blobs, roughly half high-entropy
    parts = []
    produced = 0
    while produced < target:
        txt = _text_body(rng, vocab, min(12288, max(2048, target // 6)))
        blob = rng.fill_bytes(int(len(txt) * 0.7) + int(rng.below(4096)))
        parts += [txt, b"\n%%blob %d\n" % len(blob), blob, b"\n"]
        produced += len(txt) + len(blob) + 16
    return b"".join(parts)


def _media_body(rng: SplitMix64, vocab: list[bytes], target: int) -> bytes:
    # high-entropy payload behind light periodic framing, like embedded
    # image or archive streams inside documents
    parts = [b"MEDIA0\x01\x00"]
    produced = 8
    seq = 0
    while produced < target:
        size = 16384 + int(rng.below(49152))
        header = b"SEG%06d:%08x\n" % (seq, size)
        payload = rng.fill_bytes(size)
        parts += [header, payload]
        produced += len(header) + size
        seq += 1
    return b"".join(parts)


_BUILDERS = {
    "text": _text_body,
    "csv": _csv_body,
    "log": _log_body,
    "mixed": _mixed_body,
    "media": _media_body,
}
_EXT = {"text": "txt", "csv": "csv", "log": "log", "mixed": "bin", "media": "dat"}


def generate_corpus(
    out_dir: Path,
    doc_count: int = 48,
    seed: str = DEFAULT_SEED,
    min_kb: int = 256,
    max_kb: int = 1536,
) -> list[SourceDocument]:
    """Write ``doc_count`` documents under ``out_dir``; returns them sorted by id.

    Fully determined by (seed, doc_count, min_kb, max_kb): each document
    draws from its own derived stream, so document k has identical bytes
    regardless of how many siblings are generated.
    """
    if doc_count < 1:
        raise ValueError("doc_count must be >= 1")
    if not (1 <= min_kb <= max_kb):
        raise ValueError("need 1 <= min_kb <= max_kb")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    vocab = _make_vocab(rng_for(seed, "vocab"))
    docs = []
    for i in range(doc_count):
        rng = rng_for(seed, "doc", f"{i:05d}")
        kind = _KINDS[rng.below(len(_KINDS))]
        target = (min_kb + rng.below(max_kb - min_kb + 1)) * 1024
        body = _BUILDERS[kind](rng, vocab, target)
        name = f"doc{i:04d}.{_EXT[kind]}"
        path = out_dir / name
        path.write_bytes(body)
        docs.append(SourceDocument(id=name, path=path, size=len(body)))
    docs.sort(key=lambda d: d.id)
    return docs
