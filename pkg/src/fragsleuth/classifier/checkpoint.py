"""Binary model checkpoints.

Layout (all integers little-endian):

    magic        4 bytes  "FSLC"
    version      u16      currently 1
    arch         u16 length + UTF-8 descriptor string
    K            u16      class count
    class names  K x (u16 length + UTF-8)
    epoch        u32
    val_accuracy f64
    seed         u16 length + UTF-8
    param count  u32
    per param:   name (u16 + UTF-8), ndim u8, dims u32 each,
                 raw float32 payload (row-major)

Parameters round-trip bit for bit: save then load yields identical
arrays and therefore identical predictions.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import BadMagic, TruncatedFile, VersionMismatch
from ..nn.optim import ParamSet
from .model import ARCHITECTURE, FragmentClassifier

MAGIC = b"FSLC"
VERSION = 1


@dataclass
class CheckpointData:
    arch: str
    class_names: list[str]
    epoch: int
    val_accuracy: float
    seed: str
    params: dict[str, np.ndarray]  # float32 arrays


def checkpoint_from_model(
    model: FragmentClassifier, epoch: int, val_accuracy: float, seed: str
) -> CheckpointData:
    # snapshot: training may keep mutating the live arrays afterwards
    params = {
        name: np.array(entry.value, dtype=np.float32, order="C", copy=True)
        for name, entry in model.params.items()
    }
    return CheckpointData(ARCHITECTURE, list(model.class_names), epoch, val_accuracy, seed, params)


def model_from_checkpoint(data: CheckpointData) -> FragmentClassifier:
    if data.arch != ARCHITECTURE:
        raise VersionMismatch(f"architecture {data.arch!r} != supported {ARCHITECTURE!r}")
    expected = FragmentClassifier.param_shapes(len(data.class_names))
    params = ParamSet()
    for name, shape in expected.items():
        if name not in data.params:
            raise TruncatedFile(f"checkpoint missing parameter {name!r}")
        value = data.params[name]
        if value.shape != shape:
            raise VersionMismatch(f"parameter {name!r} has shape {value.shape}, expected {shape}")
        params.add(name, value.copy())
    return FragmentClassifier(data.class_names, params, dtype=np.float32)


def _write_str(out: io.BufferedIOBase, text: str) -> None:
    raw = text.encode("utf-8")
    out.write(struct.pack("<H", len(raw)))
    out.write(raw)


def save_checkpoint(data: CheckpointData, path: Path) -> None:
    with open(path, "wb") as out:
        out.write(MAGIC)
        out.write(struct.pack("<H", VERSION))
        _write_str(out, data.arch)
        out.write(struct.pack("<H", len(data.class_names)))
        for name in data.class_names:
            _write_str(out, name)
        out.write(struct.pack("<I", data.epoch))
        out.write(struct.pack("<d", data.val_accuracy))
        _write_str(out, data.seed)
        out.write(struct.pack("<I", len(data.params)))
        for name, value in data.params.items():
            _write_str(out, name)
            out.write(struct.pack("<B", value.ndim))
            out.write(struct.pack(f"<{value.ndim}I", *value.shape))
            out.write(np.ascontiguousarray(value, dtype="<f4").tobytes())


class _Reader:
    def __init__(self, raw: bytes):
        self.raw = raw
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.raw):
            raise TruncatedFile(
                f"checkpoint ends at byte {len(self.raw)}, needed {self.pos + n}"
            )
        chunk = self.raw[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def text(self) -> str:
        (n,) = self.unpack("<H")
        return self.take(n).decode("utf-8")

    def done(self) -> bool:
        return self.pos == len(self.raw)


def load_checkpoint(path: Path) -> CheckpointData:
    reader = _Reader(Path(path).read_bytes())
    if reader.take(4) != MAGIC:
        raise BadMagic(f"{path} is not a fragsleuth checkpoint")
    (version,) = reader.unpack("<H")
    if version != VERSION:
        raise VersionMismatch(f"checkpoint version {version}, supported {VERSION}")
    arch = reader.text()
    (k,) = reader.unpack("<H")
    class_names = [reader.text() for _ in range(k)]
    (epoch,) = reader.unpack("<I")
    (val_accuracy,) = reader.unpack("<d")
    seed = reader.text()
    (count,) = reader.unpack("<I")
    params: dict[str, np.ndarray] = {}
    for _ in range(count):
        name = reader.text()
        (ndim,) = reader.unpack("<B")
        shape = reader.unpack(f"<{ndim}I")
        size = int(np.prod(shape)) if ndim else 1
        payload = reader.take(4 * size)
        params[name] = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()
    if not reader.done():
        raise TruncatedFile(f"{len(reader.raw) - reader.pos} unexpected trailing bytes")
    return CheckpointData(arch, class_names, epoch, val_accuracy, seed, params)
