"""Bit sequences: bytes unpacked MSB-first, one uint8 per bit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BitSequence:
    bits: np.ndarray  # uint8 array of 0/1, MSB of byte 0 first
    n: int

    def __post_init__(self):
        if self.bits.ndim != 1 or self.n != self.bits.size:
            raise ValueError("inconsistent bit sequence")


def bits_from_bytes(data: bytes) -> BitSequence:
    """Bit k of byte b is (b >> (7 - k)) & 1."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return BitSequence(bits=bits, n=bits.size)


def bits_from_fragment(fragment) -> BitSequence:
    return bits_from_bytes(fragment.data)


def bits_from_string(text: str) -> BitSequence:
    """Parse a "0101..."-style string; whitespace is ignored."""
    cleaned = "".join(text.split())
    if not cleaned or set(cleaned) - {"0", "1"}:
        raise ValueError("bit string must contain only 0 and 1")
    bits = np.frombuffer(cleaned.encode("ascii"), dtype=np.uint8) - ord("0")
    return BitSequence(bits=bits.astype(np.uint8), n=bits.size)
