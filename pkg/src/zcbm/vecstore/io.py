"""Binary matrix file format and the vocabulary sidecar.

Layout (little-endian):

    magic  "ZCBM"   4 bytes
    version u8      currently 1
    dtype   u8      0 = float32
    flags   u8      bit0 = rows are unit-normalized
    pad     u8
    dim     u32
    count   u64
    payload count * dim float32, row-major

The vocabulary sidecar is UTF-8 text, one concept per line, LF endings;
line index equals matrix row index.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import (
    BadMagicError,
    DimMismatchError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .types import EmbeddingMatrix

MAGIC = b"ZCBM"
VERSION = 1
DTYPE_F32 = 0
FLAG_NORMALIZED = 0x01

_HEADER = struct.Struct("<4sBBBBIQ")


def save_matrix(m: EmbeddingMatrix, path) -> None:
    flags = FLAG_NORMALIZED if m.normalized else 0
    header = _HEADER.pack(MAGIC, VERSION, DTYPE_F32, flags, 0, m.dim, m.count)
    payload = np.ascontiguousarray(m.data, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_matrix(path) -> EmbeddingMatrix:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        if raw[:4] != MAGIC:
            raise BadMagicError(f"{path}: not a ZCBM matrix file")
        raise TruncatedFileError(f"{path}: header truncated")
    magic, version, dtype, flags, _pad, dim, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    if dtype != DTYPE_F32:
        raise UnsupportedVersionError(f"{path}: unsupported dtype code {dtype}")
    expected = count * dim * 4
    payload = raw[_HEADER.size:]
    if len(payload) < expected:
        raise TruncatedFileError(
            f"{path}: payload holds {len(payload)} bytes, header promises {expected}"
        )
    if len(payload) > expected:
        raise DimMismatchError(
            f"{path}: {len(payload) - expected} trailing bytes beyond header count*dim"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    m = EmbeddingMatrix(data.copy(), normalized=bool(flags & FLAG_NORMALIZED))
    return m


def save_vocab(vocab, path) -> None:
    text = "".join(f"{entry}\n" for entry in vocab)
    Path(path).write_bytes(text.encode("utf-8"))


def load_vocab(path) -> list[str]:
    text = Path(path).read_bytes().decode("utf-8")
    if not text:
        return []
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n")
