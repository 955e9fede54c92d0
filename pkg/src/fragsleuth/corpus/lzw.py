"""LZW compressor emitting the classic Unix ``compress`` .Z format.

No LZW encoder ships with the Python standard library, and the .Z
byte stream is the fingerprint this toolkit has to reproduce, so the
format is implemented here in full:

  header    0x1F 0x9D, then a flags byte: low 5 bits = max code width
            (16 here), bit 7 = block mode (adaptive dictionary resets).
  codes     variable width, 9 to 16 bits, packed LSB-first.
  groups    the historical implementation buffers 8 codes per group; on
            every width change (and after a reset) the stream is padded
            with zero bits to the next group boundary.  Decoders realign
            the same way, so the padding is load-bearing.
  width     grows late: the check runs after each code is written, so
            one extra code still goes out at the old width once the
            dictionary outgrows it.  Early change would desync decoders.
  reset     code 256 clears the dictionary.  Once the dictionary is full
            the input/output ratio is sampled every 10000 input bytes
            and a reset is issued when it degrades.

Output decodes with ``uncompress`` and ``gzip -d``.
"""

from __future__ import annotations

_MAGIC = b"\x1f\x9d"
_MAX_BITS = 16
_BLOCK_MODE = 0x80
_CLEAR = 256
_FIRST_FREE = 257
_CHECK_GAP = 10000


class _BitPacker:
    """LSB-first code packer with the 8-code group alignment rule."""

    def __init__(self, out: bytearray):
        self.out = out
        self.buf = 0
        self.nbits = 0
        self.codes_in_group = 0

    def put(self, code: int, width: int) -> None:
        self.buf |= code << self.nbits
        self.nbits += width
        while self.nbits >= 8:
            self.out.append(self.buf & 0xFF)
            self.buf >>= 8
            self.nbits -= 8
        self.codes_in_group = (self.codes_in_group + 1) % 8

    def realign(self, width: int) -> None:
        # Pad with phantom zero codes to the group boundary; 8 * width
        # bits is a whole number of bytes, so the buffer empties too.
        pad = (-self.codes_in_group) % 8
        for _ in range(pad):
            self.put(0, width)

    def flush(self) -> None:
        if self.nbits:
            self.out.append(self.buf & 0xFF)
            self.buf = 0
            self.nbits = 0


def compress_z(data: bytes) -> bytes:
    """Compress ``data`` into a .Z stream (block mode, 16-bit codes)."""
    out = bytearray(_MAGIC)
    out.append(_MAX_BITS | _BLOCK_MODE)
    if not data:
        return bytes(out)

    packer = _BitPacker(out)
    table: dict[int, int] = {}
    next_code = _FIRST_FREE
    width = 9
    max_code = (1 << width) - 1
    table_limit = 1 << _MAX_BITS
    clear_pending = False

    def emit(code: int) -> None:
        nonlocal width, max_code, clear_pending
        packer.put(code, width)
        if next_code > max_code or clear_pending:
            packer.realign(width)
            if clear_pending:
                width = 9
                clear_pending = False
            else:
                width += 1
            # at the final width, codes up to the table limit fit and no
            # further growth check can fire
            max_code = table_limit if width == _MAX_BITS else (1 << width) - 1

    prefix = data[0]
    in_count = 1
    checkpoint = _CHECK_GAP
    best_ratio = 0

    for c in data[1:]:
        in_count += 1
        key = (prefix << 8) | c
        entry = table.get(key)
        if entry is not None:
            prefix = entry
            continue
        emit(prefix)
        prefix = c
        if next_code < table_limit:
            table[key] = next_code
            next_code += 1
        elif in_count >= checkpoint:
            # dictionary full: reset when the running ratio degrades
            checkpoint = in_count + _CHECK_GAP
            ratio = (in_count << 8) // max(1, len(out))
            if ratio > best_ratio:
                best_ratio = ratio
            else:
                best_ratio = 0
                table.clear()
                next_code = _FIRST_FREE
                clear_pending = True
                emit(_CLEAR)

    emit(prefix)
    packer.flush()
    return bytes(out)
