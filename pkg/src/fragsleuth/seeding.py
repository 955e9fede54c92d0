"""Deterministic seeding and pseudo-random generation.

The pipeline accepts seeds as strings (the default is the decimal string
"1.3035772690").  A seed string is folded to a 64-bit integer with the
FNV-1a 64-bit hash of its UTF-8 bytes, and that integer seeds a
SplitMix64 generator.  Both algorithms are defined entirely by their
published constants, so any implementation in any language reproduces
the same streams:

  FNV-1a 64:  h = 0xCBF29CE484222325; per byte: h ^= b; h *= 0x100000001B3
  SplitMix64: s += 0x9E3779B97F4A7C15
              z = s; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
              z = (z ^ z>>27) * 0x94D049BB133111EB; out = z ^ z>>31

All arithmetic is modulo 2**64.  Sub-streams for independent purposes
(per-class sampling, weight init, the train/val split) are derived by
re-folding ``seed + "\\x1f" + label`` so that no consumer perturbs
another's stream.  Epoch shuffles use ``fold_seed(seed) + epoch``.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1

_FNV64_OFFSET = 0xCBF29CE484222325
_FNV64_PRIME = 0x100000001B3

_SM64_GOLDEN = 0x9E3779B97F4A7C15
_SM64_MIX1 = 0xBF58476D1CE4E5B9
_SM64_MIX2 = 0x94D049BB133111EB


def fnv1a64(data: bytes) -> int:
    h = _FNV64_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV64_PRIME) & MASK64
    return h


def fold_seed(seed: str) -> int:
    """Map a seed string to the 64-bit SplitMix64 seed."""
    if not seed:
        raise ValueError("seed string must be nonempty")
    return fnv1a64(seed.encode("utf-8"))


def derive_seed(seed: str, *labels: str) -> int:
    """64-bit sub-stream seed for (seed, label, ...), order sensitive."""
    parts = seed
    for label in labels:
        parts += "\x1f" + label
    return fold_seed(parts)


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _SM64_MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _SM64_MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 stream over a 64-bit state."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _SM64_GOLDEN) & MASK64
        return _mix(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items) -> None:
        """In-place Fisher-Yates shuffle (back to front)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def _u64_block(self, count: int) -> np.ndarray:
        # Vectorized: output i of the stream is mix(state + (i+1)*GOLDEN).
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = self._state + idx * np.uint64(_SM64_GOLDEN)
        with np.errstate(over="ignore"):
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_SM64_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_SM64_MIX2)
        z ^= z >> np.uint64(31)
        self._state = (self._state + count * _SM64_GOLDEN) & MASK64
        return z

    def fill_bytes(self, n: int) -> bytes:
        """n pseudo-random bytes: the u64 stream in little-endian order."""
        words = self._u64_block((n + 7) // 8)
        return words.astype("<u8").tobytes()[:n]

    def uniform_array(self, count: int) -> np.ndarray:
        """float64 array of uniforms in [0, 1)."""
        return (self._u64_block(count) >> np.uint64(11)) * 2.0**-53

    def normal_array(self, count: int, std: float = 1.0) -> np.ndarray:
        """float64 Gaussians via Box-Muller on stream pairs."""
        pairs = (count + 1) // 2
        u1 = (self._u64_block(pairs) >> np.uint64(11)).astype(np.float64)
        u1 = (u1 + 1.0) * 2.0**-53  # in (0, 1], keeps log finite
        u2 = self.uniform_array(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * math.pi) * u2
        out = np.empty(pairs * 2, dtype=np.float64)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return std * out[:count]


def rng_for(seed: str, *labels: str) -> SplitMix64:
    """Generator for the sub-stream named by ``labels``."""
    return SplitMix64(derive_seed(seed, *labels) if labels else fold_seed(seed))
