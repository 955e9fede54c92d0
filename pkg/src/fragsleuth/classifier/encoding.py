"""Fragment-to-image encoding: 4096 bytes become a 64x64 grayscale image."""

from __future__ import annotations

import numpy as np

from ..errors import BadLength

IMAGE_SIDE = 64
FRAGMENT_SIZE = IMAGE_SIDE * IMAGE_SIDE


def encode_bytes(data: bytes, dtype=np.float32) -> np.ndarray:
    """Row-major byte-to-pixel map scaled into [0, 1]: pixel(r, c) = byte(64r + c) / 255."""
    if len(data) != FRAGMENT_SIZE:
        raise BadLength(f"fragment must be {FRAGMENT_SIZE} bytes, got {len(data)}")
    pixels = np.frombuffer(data, dtype=np.uint8).astype(dtype)
    pixels /= 255.0
    return pixels.reshape(IMAGE_SIDE, IMAGE_SIDE)


def encode_fragment(fragment, dtype=np.float32) -> np.ndarray:
    return encode_bytes(fragment.data, dtype=dtype)
