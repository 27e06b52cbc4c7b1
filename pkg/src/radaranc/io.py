"""Persistence: the .ranc capture format and CSV exports.

A .ranc file is a fixed 55-byte little-endian header followed by the
row-major interleaved float32 I/Q payload:

    offset  size  field
    0       4     magic "RANC"
    4       2     version (u16, currently 1)
    6       4     m_chirps (u32)
    10      4     n_fast (u32)
    14      8     f_s in Hz (f64)
    22      1     sample format code (u8, 1 = complex64 LE)
    23      32    scene digest (sha-256 of the generating scenario)
    55      m*n*8 payload

Round trips are bit-exact.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .synth import CpiFrame

MAGIC = b"RANC"
VERSION = 1
SAMPLE_FORMAT_C64 = 1

_HEADER = struct.Struct("<4sHIIdB32s")


class CaptureFormatError(ValueError):
    """Raised when a .ranc file is malformed or truncated."""


@dataclass(frozen=True)
class IqFileHeader:
    """Decoded .ranc header."""

    magic: bytes
    version: int
    m_chirps: int
    n_fast: int
    f_s: float
    sample_format: int
    scene_digest: bytes

    @property
    def payload_bytes(self) -> int:
        return self.m_chirps * self.n_fast * 8


def write_cpi(frame: CpiFrame, path) -> None:
    """Write a CPI frame as a .ranc capture."""
    path = Path(path)
    header = _HEADER.pack(
        MAGIC, VERSION, frame.m_chirps, frame.n_fast, frame.f_s,
        SAMPLE_FORMAT_C64, frame.scene_digest,
    )
    payload = np.ascontiguousarray(frame.data, dtype="<c8").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write capture {path}: {exc}") from exc


def _decode_header(raw: bytes, path: Path) -> IqFileHeader:
    if len(raw) < _HEADER.size:
        raise CaptureFormatError(f"{path}: file shorter than the header")
    magic, version, m, n, f_s, fmt, digest = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CaptureFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CaptureFormatError(f"{path}: unsupported version {version}")
    if fmt != SAMPLE_FORMAT_C64:
        raise CaptureFormatError(f"{path}: unknown sample format {fmt}")
    return IqFileHeader(magic=magic, version=version, m_chirps=m, n_fast=n,
                        f_s=f_s, sample_format=fmt, scene_digest=digest)


def read_header(path) -> IqFileHeader:
    """Decode and validate just the header of a .ranc capture."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = fh.read(_HEADER.size)
    except OSError as exc:
        raise OSError(f"cannot read capture {path}: {exc}") from exc
    return _decode_header(raw, path)


def read_cpi(path) -> CpiFrame:
    """Read a .ranc capture; inverse of :func:`write_cpi`."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read capture {path}: {exc}") from exc
    header = _decode_header(raw, path)
    if len(raw) != _HEADER.size + header.payload_bytes:
        raise CaptureFormatError(
            f"{path}: payload is {len(raw) - _HEADER.size} bytes, expected "
            f"{header.payload_bytes} for {header.m_chirps}x{header.n_fast} samples"
        )
    data = np.frombuffer(raw, dtype="<c8", offset=_HEADER.size)
    data = data.reshape(header.m_chirps, header.n_fast)
    return CpiFrame(data=data.copy(), f_s=header.f_s,
                    scene_digest=header.scene_digest)


def export_csv(
    matrix,
    path,
    col_values: Sequence,
    row_values: Optional[Sequence] = None,
    corner: str = "bin",
) -> None:
    """Write a matrix as CSV: header row of column-axis values, then one
    row per matrix row, optionally prefixed with its row-axis value.

    Values are written with full repr precision and a '.' decimal point
    regardless of locale.
    """
    m = np.atleast_2d(np.asarray(matrix))
    if len(col_values) != m.shape[1] and m.size > 0:
        raise ValueError(f"{len(col_values)} column labels for {m.shape[1]} columns")
    if row_values is not None and m.size > 0 and len(row_values) != m.shape[0]:
        raise ValueError(f"{len(row_values)} row labels for {m.shape[0]} rows")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = [corner] if row_values is not None else []
        writer.writerow(header + [_fmt(c) for c in col_values])
        if m.size == 0:
            return
        for i, row in enumerate(m):
            prefix = [_fmt(row_values[i])] if row_values is not None else []
            writer.writerow(prefix + [_fmt(v) for v in row])


def read_csv_matrix(path) -> tuple[np.ndarray, list[str]]:
    """Parse a CSV written by :func:`export_csv` into a float matrix plus
    the header fields.  Every data cell is parsed, so when the file
    carries a row axis its values appear as the first matrix column."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CaptureFormatError(f"{path}: empty CSV")
    header, data = rows[0], rows[1:]
    matrix = np.array([[float(v) for v in row] for row in data]) if data else np.empty((0, len(header)))
    return matrix, header


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return str(v)
