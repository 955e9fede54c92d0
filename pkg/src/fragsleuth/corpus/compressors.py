"""Compressor adapters.

Eight tool identities are recognised.  Tools that operate on
directories (rar, zip, sevenzip) compress a staged single-file
directory; everything else compresses a tar archive of that directory
(tar_first packaging).

An adapter resolves through three routes, first hit wins:

  1. a user-supplied command template ("{input}"/"{output}" placeholders),
  2. a builtin, library-backed implementation,
  3. the tool's conventional binary on PATH with default flags.

Builtins are preferred over PATH binaries because their output is a
pure function of document bytes: tars are written with zeroed
timestamps and owners, zip members carry a fixed DOS date, and the
gzip header mtime is zeroed.  Staged inputs for external commands get
their mtimes zeroed for the same reason.  Missing tools are reported
as skipped, never as a corpus-build failure.
"""

from __future__ import annotations

import bz2
import gzip
import io
import os
import shutil
import subprocess
import tarfile
import zipfile
import zlib
from dataclasses import dataclass
from pathlib import Path

from ..errors import ToolFailed, ToolNotFound
from . import lz4 as lz4mod
from . import lzw
from .documents import SourceDocument

try:
    import brotli as _brotli
except ImportError:
    _brotli = None

TOOL_IDS = ("rar", "gzip", "zip", "sevenzip", "bzip2", "compress", "lz4", "brotli")
DIRECTORY_TOOLS = frozenset({"rar", "zip", "sevenzip"})

_EXTENSIONS = {
    "rar": "rar",
    "zip": "zip",
    "sevenzip": "7z",
    "gzip": "tar.gz",
    "bzip2": "tar.bz2",
    "compress": "tar.Z",
    "lz4": "tar.lz4",
    "brotli": "tar.br",
}

_DEFAULT_COMMANDS = {
    "rar": ("rar", "a", "-idq", "{output}", "{input}"),
    "sevenzip": ("7z", "a", "-bso0", "-bsp0", "{output}", "{input}"),
    "zip": ("zip", "-q", "-r", "-X", "{output}", "{input}"),
    "gzip": ("gzip", "-c", "{input}"),
    "bzip2": ("bzip2", "-c", "{input}"),
    "compress": ("compress", "-c", "{input}"),
    "lz4": ("lz4", "-q", "-c", "{input}"),
    "brotli": ("brotli", "-c", "{input}"),
}


@dataclass(frozen=True)
class CompressorSpec:
    tool_id: str
    version: str
    packaging: str  # "directory" or "tar_first"
    command: tuple[str, ...] | None = None  # None selects the builtin route

    def __post_init__(self):
        if self.tool_id not in TOOL_IDS:
            raise ValueError(f"unknown tool id {self.tool_id!r}")
        expected = "directory" if self.tool_id in DIRECTORY_TOOLS else "tar_first"
        if self.packaging != expected:
            raise ValueError(f"{self.tool_id} requires {expected} packaging")


def _gzip_bytes(data: bytes) -> bytes:
    # level 6 and a zeroed header mtime mirror the gzip CLI defaults
    return gzip.compress(data, compresslevel=6, mtime=0)


def _zip_directory(doc_id: str, file_name: str, payload: bytes) -> bytes:
    buf = io.BytesIO()
    stamp = (1980, 1, 1, 0, 0, 0)
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        dir_info = zipfile.ZipInfo(doc_id + "/", date_time=stamp)
        dir_info.external_attr = (0o40755 << 16) | 0x10
        zf.writestr(dir_info, b"")
        info = zipfile.ZipInfo(f"{doc_id}/{file_name}", date_time=stamp)
        info.external_attr = 0o644 << 16
        info.compress_type = zipfile.ZIP_DEFLATED
        zf.writestr(info, payload)
    return buf.getvalue()


_BUILTIN_STREAM = {
    "gzip": (_gzip_bytes, f"zlib-{zlib.ZLIB_VERSION}"),
    "bzip2": (lambda d: bz2.compress(d, 9), "libbz2-builtin"),
    "compress": (lzw.compress_z, "builtin-lzw-16"),
    "lz4": (lz4mod.compress_frame, "builtin-frame-v1"),
}
if _brotli is not None:
    _BUILTIN_STREAM["brotli"] = (_brotli.compress, "brotli-lib")


def _has_builtin(tool_id: str) -> bool:
    return tool_id in _BUILTIN_STREAM or tool_id == "zip"


def _probe_version(argv0: str) -> str:
    try:
        proc = subprocess.run(
            [argv0, "--version"], capture_output=True, text=True, timeout=10
        )
        line = (proc.stdout or proc.stderr).splitlines()
        return line[0].strip() if line else "unknown"
    except (OSError, subprocess.TimeoutExpired):
        return "unknown"


def resolve_tools(
    requested: list[str], overrides: dict[str, str] | None = None
) -> tuple[list[CompressorSpec], dict[str, str]]:
    """Adapter specs for ``requested`` tools plus reasons for any skipped."""
    overrides = overrides or {}
    specs: list[CompressorSpec] = []
    skipped: dict[str, str] = {}
    for tool in requested:
        if tool not in TOOL_IDS:
            raise ValueError(f"unknown tool id {tool!r} (expected one of {', '.join(TOOL_IDS)})")
        packaging = "directory" if tool in DIRECTORY_TOOLS else "tar_first"
        if tool in overrides:
            command = tuple(overrides[tool].split())
            specs.append(
                CompressorSpec(tool, _probe_version(command[0]), packaging, command)
            )
        elif _has_builtin(tool):
            if tool == "zip":
                version = f"zipfile-deflate-{zlib.ZLIB_VERSION}"
            else:
                version = _BUILTIN_STREAM[tool][1]
            specs.append(CompressorSpec(tool, version, packaging))
        elif shutil.which(_DEFAULT_COMMANDS[tool][0]):
            command = _DEFAULT_COMMANDS[tool]
            specs.append(
                CompressorSpec(tool, _probe_version(command[0]), packaging, command)
            )
        else:
            skipped[tool] = f"no builtin adapter and {_DEFAULT_COMMANDS[tool][0]!r} not on PATH"
    return specs, skipped


def _deterministic_tar(doc_id: str, file_name: str, payload: bytes) -> bytes:
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.GNU_FORMAT) as tf:
        dir_info = tarfile.TarInfo(doc_id + "/")
        dir_info.type = tarfile.DIRTYPE
        dir_info.mode = 0o755
        dir_info.mtime = 0
        tf.addfile(dir_info)
        info = tarfile.TarInfo(f"{doc_id}/{file_name}")
        info.size = len(payload)
        info.mode = 0o644
        info.mtime = 0
        tf.addfile(info, io.BytesIO(payload))
    return buf.getvalue()


def _stage_directory(doc: SourceDocument, stage_root: Path) -> Path:
    stage = stage_root / doc.id
    stage.mkdir(parents=True, exist_ok=True)
    target = stage / doc.path.name
    shutil.copyfile(doc.path, target)
    os.utime(target, (0, 0))
    os.utime(stage, (0, 0))
    return stage


def _run_command(command: tuple[str, ...], input_path: Path, output_path: Path, cwd: Path):
    writes_file = any("{output}" in tok for tok in command)
    argv = [tok.format(input=str(input_path), output=str(output_path)) for tok in command]
    try:
        if writes_file:
            proc = subprocess.run(argv, capture_output=True, cwd=cwd)
        else:
            with open(output_path, "wb") as out:
                proc = subprocess.run(argv, stdout=out, stderr=subprocess.PIPE, cwd=cwd)
    except FileNotFoundError as exc:
        raise ToolNotFound(f"{argv[0]!r} not executable") from exc
    if proc.returncode != 0:
        tail = proc.stderr.decode("utf-8", "replace")[-500:]
        raise ToolFailed(f"{argv[0]} exited {proc.returncode}: {tail}")
    if not output_path.exists() or output_path.stat().st_size == 0:
        raise ToolFailed(f"{argv[0]} produced no output at {output_path}")


def compress_document(
    doc: SourceDocument, spec: CompressorSpec, workdir: Path, out_dir: Path
) -> tuple[Path, int]:
    """Compress one document with one tool; returns (output path, size)."""
    out_tool_dir = Path(out_dir) / spec.tool_id
    out_tool_dir.mkdir(parents=True, exist_ok=True)
    output = out_tool_dir / f"{doc.id}.{_EXTENSIONS[spec.tool_id]}"
    payload = doc.path.read_bytes()

    if spec.command is None:
        if spec.tool_id == "zip":
            blob = _zip_directory(doc.id, doc.path.name, payload)
        elif spec.tool_id in _BUILTIN_STREAM:
            tar_bytes = _deterministic_tar(doc.id, doc.path.name, payload)
            blob = _BUILTIN_STREAM[spec.tool_id][0](tar_bytes)
        else:
            raise ToolNotFound(f"no builtin adapter for {spec.tool_id}")
        output.write_bytes(blob)
        return output, len(blob)

    stage_root = Path(workdir) / spec.tool_id
    stage_root.mkdir(parents=True, exist_ok=True)
    if output.exists():
        output.unlink()  # archivers like zip/rar append to existing files
    try:
        if spec.packaging == "directory":
            stage = _stage_directory(doc, stage_root)
            _run_command(spec.command, Path(doc.id), output, cwd=stage_root)
            shutil.rmtree(stage, ignore_errors=True)
        else:
            tar_path = stage_root / f"{doc.id}.tar"
            tar_path.write_bytes(_deterministic_tar(doc.id, doc.path.name, payload))
            os.utime(tar_path, (0, 0))
            _run_command(spec.command, tar_path, output, cwd=stage_root)
            tar_path.unlink(missing_ok=True)
    except ToolFailed:
        output.unlink(missing_ok=True)
        raise
    return output, output.stat().st_size
