"""Snapshot files: flat binary with a self-describing header, plus CSV export.

Layout (little-endian):
    magic   4 bytes  b"TFS1"
    res     uint32   grid resolution N
    time    float64  sample instant
    crc     uint32   zlib.crc32 of the payload
    payload N*N float64, row-major (axis 0 = x1)
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import SnapshotFormatError
from .grid import Grid, VorticityField

MAGIC = b"TFS1"
_HEADER = struct.Struct("<4sId I")


def write_snapshot(path, field: VorticityField, time: float) -> None:
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    header = _HEADER.pack(MAGIC, field.grid.resolution, float(time), zlib.crc32(payload))
    Path(path).write_bytes(header + payload)


def read_snapshot(path) -> tuple[VorticityField, float]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    magic, res, time, crc = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {magic!r}")
    payload = raw[_HEADER.size :]
    if len(payload) != 8 * res * res:
        raise SnapshotFormatError(f"{path}: payload size {len(payload)} != {8 * res * res}")
    if zlib.crc32(payload) != crc:
        raise SnapshotFormatError(f"{path}: checksum mismatch")
    values = np.frombuffer(payload, dtype="<f8").reshape(res, res).copy()
    return VorticityField(Grid(int(res)), values), float(time)


def export_csv(path, field: VorticityField, time: float, max_resolution: int = 512) -> None:
    """Plain-text export (x1, x2, value); guarded against huge grids."""
    n = field.grid.resolution
    if n > max_resolution:
        raise ValueError(f"CSV export limited to N <= {max_resolution}, got {n}")
    nodes = field.grid.nodes
    with open(path, "w") as fh:
        fh.write(f"# t={time:.17g} resolution={n}\n")
        fh.write("x1,x2,omega\n")
        for i in range(n):
            for j in range(n):
                fh.write(f"{nodes[i]:.17g},{nodes[j]:.17g},{field.values[i, j]:.17g}\n")
