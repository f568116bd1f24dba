"""File formats: the IGRID binary raster container and the pick CSV.

IGRID layout (all little-endian, 44-byte header)::

    offset  size  field
    0       4     magic, b"IGLG"
    4       2     version, u16 = 1
    6       2     dtype, u16: 0 = IEEE-754 float32, 1 = unsigned byte
    8       4     n_depth, u32
    12      4     n_azimuth, u32
    16      8     depth_start, f64 (meters)
    24      8     depth_step, f64 (meters)
    32      2     channel, u16: 0 amplitude, 1 radius, 2 mask, 3 probability
    34      2     reserved, u16 = 0
    36      8     reserved padding, must be zero
    44      -     payload, row-major (depth-major, azimuth-minor)

Masks use dtype 1; amplitude, radius and probability grids use dtype 0.
Radius is stored in millimeters. Writes are deterministic: the same grid
always produces the same byte stream.

Pick CSV: header ``depth_m,azimuth_deg,width_deg,left_deg,right_deg,status,source``,
UTF-8, LF line endings, numeric fields rendered with 6 decimal places.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .core import (
    AMPLITUDE,
    PICK_SOURCES,
    PICK_STATUSES,
    RADIUS,
    BreakoutKitError,
    BreakoutPick,
    Grid,
    GridGeometry,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    ParseError,
    PickSet,
    ProbGrid,
)

MAGIC = b"IGLG"
VERSION = 1
_HEADER = struct.Struct("<4sHHIIddHH8x")
HEADER_SIZE = _HEADER.size  # 44

DTYPE_F32 = 0
DTYPE_U8 = 1

CHANNEL_AMPLITUDE = 0
CHANNEL_RADIUS = 1
CHANNEL_MASK = 2
CHANNEL_PROBABILITY = 3

_OFF_MAGIC = 0
_OFF_VERSION = 4
_OFF_DTYPE = 6
_OFF_SHAPE = 8
_OFF_CHANNEL = 32
_OFF_RESERVED = 34
_OFF_PAYLOAD = HEADER_SIZE

_CHANNEL_DTYPE = {
    CHANNEL_AMPLITUDE: DTYPE_F32,
    CHANNEL_RADIUS: DTYPE_F32,
    CHANNEL_MASK: DTYPE_U8,
    CHANNEL_PROBABILITY: DTYPE_F32,
}


def _grid_channel_code(grid: Grid) -> int:
    if isinstance(grid, MaskGrid):
        return CHANNEL_MASK
    if isinstance(grid, ProbGrid):
        return CHANNEL_PROBABILITY
    return CHANNEL_AMPLITUDE if grid.channel == AMPLITUDE else CHANNEL_RADIUS


def _revalidate(grid: Grid) -> None:
    # Backing arrays are read-only, but a determined caller can still flip
    # the flag; never let an invalid grid reach disk.
    v = grid.values
    if isinstance(grid, MaskGrid):
        if not np.isin(v, (0, 1)).all():
            raise ParameterError("refusing to write mask with values outside {0,1}")
    elif isinstance(grid, ProbGrid):
        if not ((v >= 0.0) & (v <= 1.0)).all():
            raise ParameterError("refusing to write probabilities outside [0,1]")
    elif grid.channel == RADIUS:
        finite = v[np.isfinite(v)]
        if finite.size and not (finite > 0).all():
            raise ParameterError("refusing to write non-positive radius values")


def grid_to_bytes(grid: Grid) -> bytes:
    _revalidate(grid)
    g = grid.geometry
    channel = _grid_channel_code(grid)
    dtype = _CHANNEL_DTYPE[channel]
    header = _HEADER.pack(
        MAGIC, VERSION, dtype, g.n_depth, g.n_azimuth,
        g.depth_start, g.depth_step, channel, 0,
    )
    if dtype == DTYPE_U8:
        payload = np.ascontiguousarray(grid.values, dtype=np.uint8).tobytes()
    else:
        payload = np.ascontiguousarray(grid.values, dtype="<f4").tobytes()
    return header + payload


def write_grid(grid: Grid, path: str | os.PathLike) -> None:
    """Serialize a grid to ``path`` in the IGRID format."""
    Path(path).write_bytes(grid_to_bytes(grid))


def grid_from_bytes(data: bytes) -> Grid:
    if len(data) < HEADER_SIZE:
        raise ParseError(
            f"file too short for IGRID header ({len(data)} < {HEADER_SIZE} bytes)",
            offset=len(data),
        )
    magic, version, dtype, n_depth, n_azimuth, depth_start, depth_step, channel, reserved = (
        _HEADER.unpack_from(data, 0)
    )
    if magic != MAGIC:
        raise ParseError(f"bad magic {magic!r}, expected {MAGIC!r}", offset=_OFF_MAGIC)
    if version != VERSION:
        raise ParseError(f"unsupported version {version}", offset=_OFF_VERSION)
    if channel not in _CHANNEL_DTYPE:
        raise ParseError(f"unknown channel code {channel}", offset=_OFF_CHANNEL)
    if dtype not in (DTYPE_F32, DTYPE_U8):
        raise ParseError(f"unknown dtype code {dtype}", offset=_OFF_DTYPE)
    if dtype != _CHANNEL_DTYPE[channel]:
        raise ParseError(
            f"dtype {dtype} not valid for channel {channel}", offset=_OFF_DTYPE
        )
    if reserved != 0:
        raise ParseError(f"reserved field must be 0, got {reserved}", offset=_OFF_RESERVED)
    try:
        geometry = GridGeometry(n_depth, n_azimuth, depth_start, depth_step)
    except BreakoutKitError as exc:
        raise ParseError(f"invalid geometry: {exc}", offset=_OFF_SHAPE) from exc

    n_cells = n_depth * n_azimuth
    cell_size = 1 if dtype == DTYPE_U8 else 4
    expected = HEADER_SIZE + n_cells * cell_size
    if len(data) < expected:
        raise ParseError(
            f"truncated payload: expected {expected} bytes, got {len(data)}",
            offset=len(data),
        )
    if len(data) > expected:
        raise ParseError(
            f"{len(data) - expected} trailing bytes after payload", offset=expected
        )

    if dtype == DTYPE_U8:
        values = np.frombuffer(data, dtype=np.uint8, count=n_cells, offset=HEADER_SIZE)
    else:
        values = np.frombuffer(data, dtype="<f4", count=n_cells, offset=HEADER_SIZE)
    values = values.reshape(n_depth, n_azimuth)

    try:
        if channel == CHANNEL_MASK:
            return MaskGrid(geometry, values)
        if channel == CHANNEL_PROBABILITY:
            return ProbGrid(geometry, values)
        name = AMPLITUDE if channel == CHANNEL_AMPLITUDE else RADIUS
        return ImageLogGrid(geometry, name, values)
    except BreakoutKitError as exc:
        raise ParseError(f"payload violates grid invariants: {exc}", offset=_OFF_PAYLOAD) from exc


def read_grid(path: str | os.PathLike) -> Grid:
    """Read an IGRID file; the channel code selects the returned grid kind."""
    return grid_from_bytes(Path(path).read_bytes())


PICK_CSV_HEADER = "depth_m,azimuth_deg,width_deg,left_deg,right_deg,status,source"


def _fmt_position(angle: float) -> str:
    # An angle just under 360 rounds to "360.000000", which is outside the
    # [0, 360) field domain; the circle-equivalent "0.000000" is written
    # instead (the 6-decimal format cannot tell them apart anyway).
    text = f"{angle:.6f}"
    return "0.000000" if text == "360.000000" else text


def write_picks(pick_set: PickSet, path: str | os.PathLike) -> None:
    """Write a pick set as CSV (6 decimal places, LF line endings)."""
    lines = [PICK_CSV_HEADER]
    for p in pick_set:
        width = f"{p.width_deg:.6f}"
        if width == "360.000000":
            raise ParameterError(
                f"width {p.width_deg} is not representable at 6 decimal places"
            )
        lines.append(
            f"{p.depth:.6f},{_fmt_position(p.azimuth_deg)},{width},"
            f"{_fmt_position(p.left_deg)},{_fmt_position(p.right_deg)},"
            f"{p.status},{pick_set.source}"
        )
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_picks(path: str | os.PathLike) -> PickSet:
    """Read a pick CSV written by :func:`write_picks`.

    Raises :class:`ParseError` naming the 1-based line number of the first
    malformed row.
    """
    text = Path(path).read_bytes().decode("utf-8")
    lines = text.split("\n")
    if not lines or lines[0].strip() != PICK_CSV_HEADER:
        raise ParseError(f"bad pick CSV header {lines[0]!r}", offset=1)
    picks: list[BreakoutPick] = []
    source: str | None = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 7:
            raise ParseError(f"expected 7 fields, got {len(fields)}", offset=lineno)
        try:
            depth, azimuth, width, left, right = (float(x) for x in fields[:5])
        except ValueError as exc:
            raise ParseError(f"non-numeric field: {exc}", offset=lineno) from exc
        status, row_source = fields[5].strip(), fields[6].strip()
        if status not in PICK_STATUSES:
            raise ParseError(f"unknown status {status!r}", offset=lineno)
        if row_source not in PICK_SOURCES:
            raise ParseError(f"unknown source {row_source!r}", offset=lineno)
        if source is None:
            source = row_source
        elif row_source != source:
            raise ParseError(
                f"mixed sources in one file: {source!r} then {row_source!r}",
                offset=lineno,
            )
        try:
            picks.append(BreakoutPick(depth, left, right, width, azimuth, status))
        except BreakoutKitError as exc:
            raise ParseError(f"invalid pick: {exc}", offset=lineno) from exc
    try:
        return PickSet(tuple(picks), source if source is not None else "synthetic")
    except BreakoutKitError as exc:
        raise ParseError(f"invalid pick set: {exc}") from exc


def write_atomic(data: bytes, path: str | os.PathLike) -> None:
    """Write ``data`` to ``path`` via a temp file + rename in the same
    directory, so readers never observe a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
