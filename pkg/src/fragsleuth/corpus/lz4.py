"""LZ4 compressor producing standard frame-format streams.

Implemented here because no LZ4 encoder is available in the standard
library.  Output follows the interoperable v1 frame format: magic
0x184D2204, header flags (independent blocks, 4 MB max block size, no
content checksum, matching common library defaults), xxHash32 header
checksum byte, then compressed blocks and a zero end mark.

The block encoder is the usual greedy hash-table matcher: 4-byte
minimum matches within a 64 KB window, literal/match lengths in a
token nibble with 255-run extensions, and the format's end-of-block
rules (final 5 bytes literal, no match starting within the last 12).
An acceleration step that grows after repeated misses keeps scan cost
low on incompressible spans, as in the reference fast path.
"""

from __future__ import annotations

import numpy as np

_FRAME_MAGIC = 0x184D2204
_MAX_BLOCK = 4 * 1024 * 1024
_HASHLOG = 12
_HASH_MUL = np.uint32(2654435761)
_MIN_MATCH = 4
_MF_LIMIT = 12
_LAST_LITERALS = 5
_MAX_OFFSET = 65535

_P1, _P2, _P3, _P4, _P5 = 2654435761, 2246822519, 3266489917, 668265263, 374761393
_M32 = 0xFFFFFFFF


def _rotl(x: int, r: int) -> int:
    return ((x << r) | (x >> (32 - r))) & _M32


def xxh32(data: bytes, seed: int = 0) -> int:
    n = len(data)
    i = 0
    if n >= 16:
        v1 = (seed + _P1 + _P2) & _M32
        v2 = (seed + _P2) & _M32
        v3 = seed & _M32
        v4 = (seed - _P1) & _M32
        while i + 16 <= n:
            for j, v in enumerate((v1, v2, v3, v4)):
                lane = int.from_bytes(data[i + 4 * j : i + 4 * j + 4], "little")
                v = _rotl((v + lane * _P2) & _M32, 13) * _P1 & _M32
                if j == 0:
                    v1 = v
                elif j == 1:
                    v2 = v
                elif j == 2:
                    v3 = v
                else:
                    v4 = v
            i += 16
        h = (_rotl(v1, 1) + _rotl(v2, 7) + _rotl(v3, 12) + _rotl(v4, 18)) & _M32
    else:
        h = (seed + _P5) & _M32
    h = (h + n) & _M32
    while i + 4 <= n:
        h = _rotl((h + int.from_bytes(data[i : i + 4], "little") * _P3) & _M32, 17) * _P4 & _M32
        i += 4
    while i < n:
        h = _rotl((h + data[i] * _P5) & _M32, 11) * _P1 & _M32
        i += 1
    h ^= h >> 15
    h = h * _P2 & _M32
    h ^= h >> 13
    h = h * _P3 & _M32
    h ^= h >> 16
    return h


def _match_len(data: bytes, a: int, b: int, limit: int) -> int:
    """Equal-byte run length of data[a:] vs data[b:], b side capped at limit."""
    i = 0
    while b + i + 16 <= limit and data[a + i : a + i + 16] == data[b + i : b + i + 16]:
        i += 16
    while b + i < limit and data[a + i] == data[b + i]:
        i += 1
    return i


def _emit_lengths(out: bytearray, extra: int) -> None:
    while extra >= 255:
        out.append(255)
        extra -= 255
    out.append(extra)


def _emit_sequence(out: bytearray, data: bytes, lit_start: int, lit_end: int,
                   offset: int | None, match_extra: int = 0) -> None:
    lit = lit_end - lit_start
    lit_tok = 15 if lit >= 15 else lit
    match_tok = 0 if offset is None else (15 if match_extra >= 15 else match_extra)
    out.append((lit_tok << 4) | match_tok)
    if lit_tok == 15:
        _emit_lengths(out, lit - 15)
    out += data[lit_start:lit_end]
    if offset is not None:
        out += offset.to_bytes(2, "little")
        if match_tok == 15:
            _emit_lengths(out, match_extra - 15)


def compress_block(data: bytes) -> bytes:
    """Compress one independent block (<= 4 MB)."""
    n = len(data)
    out = bytearray()
    if n < _MF_LIMIT + 1:
        _emit_sequence(out, data, 0, n, None)
        return bytes(out)

    a = np.frombuffer(data, dtype=np.uint8).astype(np.uint32)
    u32 = a[: n - 3] | (a[1 : n - 2] << np.uint32(8)) | (a[2 : n - 1] << np.uint32(16)) | (
        a[3:] << np.uint32(24)
    )
    with np.errstate(over="ignore"):
        hashes = ((u32 * _HASH_MUL) >> np.uint32(32 - _HASHLOG)).astype(np.int64)
    hashes_l = hashes.tolist()
    u32_l = u32.tolist()
    table = [-1] * (1 << _HASHLOG)

    mflimit = n - _MF_LIMIT
    matchlimit = n - _LAST_LITERALS
    anchor = 0
    pos = 1
    table[hashes_l[0]] = 0

    while True:
        # search, stepping further after repeated misses
        attempts = 64
        cand = -1
        while True:
            if pos > mflimit:
                _emit_sequence(out, data, anchor, n, None)
                return bytes(out)
            h = hashes_l[pos]
            cand = table[h]
            table[h] = pos
            if cand >= 0 and pos - cand <= _MAX_OFFSET and u32_l[cand] == u32_l[pos]:
                break
            pos += attempts >> 6
            attempts += 1

        # extend the match backwards over pending literals
        while pos > anchor and cand > 0 and data[pos - 1] == data[cand - 1]:
            pos -= 1
            cand -= 1

        mlen = _MIN_MATCH + _match_len(data, cand + _MIN_MATCH, pos + _MIN_MATCH, matchlimit)
        _emit_sequence(out, data, anchor, pos, pos - cand, mlen - _MIN_MATCH)
        pos += mlen
        anchor = pos
        if pos > mflimit:
            _emit_sequence(out, data, anchor, n, None)
            return bytes(out)
        table[hashes_l[pos - 2]] = pos - 2

    # unreachable


def compress_frame(data: bytes) -> bytes:
    """Wrap ``data`` in an LZ4 frame of independent blocks."""
    flg = (1 << 6) | (1 << 5)  # version 01, block independence
    bd = 7 << 4  # 4 MB max block size
    header = bytes([flg, bd])
    out = bytearray(_FRAME_MAGIC.to_bytes(4, "little"))
    out += header
    out.append((xxh32(header) >> 8) & 0xFF)
    for start in range(0, len(data), _MAX_BLOCK):
        chunk = data[start : start + _MAX_BLOCK]
        comp = compress_block(chunk)
        if len(comp) < len(chunk):
            out += len(comp).to_bytes(4, "little")
            out += comp
        else:  # incompressible: store raw, high bit flags it
            out += (len(chunk) | 0x80000000).to_bytes(4, "little")
            out += chunk
    out += (0).to_bytes(4, "little")
    return bytes(out)
