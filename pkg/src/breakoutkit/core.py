"""Core domain types for depth-by-azimuth borehole image logs.

All grids live on a regular depth x azimuth raster. The azimuth axis is
circular: column ``c`` covers the interval ``[c*step, (c+1)*step)`` degrees
and column ``n_azimuth - 1`` is adjacent to column 0. Azimuths are relative
to magnetic north; no declination correction is applied anywhere in the
package.

Types are immutable after construction (backing arrays are marked
read-only) so they are safe to share across threads and processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

AMPLITUDE = "amplitude"
RADIUS = "radius"

STATUS_CANDIDATE = "candidate"
STATUS_VALIDATED = "validated"
STATUS_REJECTED_COUNT = "rejected:count_not_two"
STATUS_REJECTED_SEPARATION = "rejected:separation"
PICK_STATUSES = (
    STATUS_CANDIDATE,
    STATUS_VALIDATED,
    STATUS_REJECTED_COUNT,
    STATUS_REJECTED_SEPARATION,
)

PICK_SOURCES = ("manual", "peak_detect", "segnet", "synthetic")

# A pick's stored width/azimuth must agree with its edges to this tolerance.
# Picks built by the factory helpers agree to 1e-9; the looser bound absorbs
# the 6-decimal rounding of the CSV interchange format.
EDGE_CONSISTENCY_TOL_DEG = 2e-6


class BreakoutKitError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BreakoutKitError):
    """An argument is outside its documented domain."""


class GeometryError(BreakoutKitError):
    """Two objects that must share a raster geometry do not."""


class ParseError(BreakoutKitError):
    """A file does not conform to its format.

    ``offset`` is a byte offset for binary formats and a 1-based line
    number for text formats.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class SingularityError(ParameterError):
    """A formula was evaluated at a pole of its domain."""


@dataclass(frozen=True, slots=True)
class GridGeometry:
    """Raster geometry of an image-log grid.

    ``azimuth_step`` is always ``360 / n_azimuth``; the azimuth axis covers
    the full circle exactly.
    """

    n_depth: int
    n_azimuth: int
    depth_start: float
    depth_step: float

    def __post_init__(self):
        if self.n_depth < 1:
            raise ParameterError(f"n_depth must be positive, got {self.n_depth}")
        if self.n_azimuth < 8:
            raise ParameterError(f"n_azimuth must be >= 8, got {self.n_azimuth}")
        if not (self.depth_step > 0):
            raise ParameterError(f"depth_step must be > 0, got {self.depth_step}")
        if not math.isfinite(self.depth_start):
            raise ParameterError("depth_start must be finite")

    @property
    def azimuth_step(self) -> float:
        return 360.0 / self.n_azimuth

    def depth_of_row(self, r: int) -> float:
        """Depth of grid row ``r`` in meters."""
        if not 0 <= r < self.n_depth:
            raise ParameterError(f"row {r} out of range [0, {self.n_depth})")
        return self.depth_start + r * self.depth_step

    def shape(self) -> tuple[int, int]:
        return (self.n_depth, self.n_azimuth)


def azimuth_of_column(c: int, g: GridGeometry) -> float:
    """Azimuth (degrees) of the left boundary of column ``c``."""
    if not 0 <= c < g.n_azimuth:
        raise ParameterError(f"column {c} out of range [0, {g.n_azimuth})")
    return c * g.azimuth_step


def _freeze(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, slots=True)
class ImageLogGrid:
    """Measured log raster: acoustic amplitude (dimensionless) or borehole
    radius (millimeters). Missing measurements are encoded as NaN."""

    geometry: GridGeometry
    channel: str
    values: np.ndarray

    def __post_init__(self):
        if self.channel not in (AMPLITUDE, RADIUS):
            raise ParameterError(f"unknown channel {self.channel!r}")
        v = np.asarray(self.values, dtype=np.float32)
        if v.shape != self.geometry.shape():
            raise GeometryError(
                f"values shape {v.shape} != geometry {self.geometry.shape()}"
            )
        if self.channel == RADIUS:
            finite = v[np.isfinite(v)]
            if finite.size and not (finite > 0).all():
                raise ParameterError("radius values must be > 0 where present")
        object.__setattr__(self, "values", _freeze(v))


@dataclass(frozen=True, slots=True)
class MaskGrid:
    """Binary breakout labels: 1 = breakout, 0 = background. Dense (no
    missing cells)."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.geometry.shape():
            raise GeometryError(
                f"values shape {v.shape} != geometry {self.geometry.shape()}"
            )
        if not np.isin(v, (0, 1)).all():
            raise ParameterError("mask values must all be 0 or 1")
        object.__setattr__(self, "values", _freeze(v.astype(np.uint8)))


@dataclass(frozen=True, slots=True)
class ProbGrid:
    """Per-cell breakout probabilities in [0, 1]. Dense (no missing cells)."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float32)
        if v.shape != self.geometry.shape():
            raise GeometryError(
                f"values shape {v.shape} != geometry {self.geometry.shape()}"
            )
        if not ((v >= 0.0) & (v <= 1.0)).all():
            raise ParameterError("probabilities must all lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(v))


Grid = ImageLogGrid | MaskGrid | ProbGrid


def same_geometry(a, b) -> bool:
    return a.geometry == b.geometry


def grids_equal(a, b) -> bool:
    """Cell-for-cell equality (NaN compares equal to NaN)."""
    return (
        type(a) is type(b)
        and a.geometry == b.geometry
        and getattr(a, "channel", None) == getattr(b, "channel", None)
        and np.array_equal(a.values, b.values, equal_nan=True)
    )


def union_masks(a: MaskGrid, b: MaskGrid) -> MaskGrid:
    """Cellwise OR of two label masks.

    Used to merge independently annotated amplitude and radius masks into a
    single inclusive label.
    """
    if a.geometry != b.geometry:
        raise GeometryError("union_masks requires identical geometry")
    return MaskGrid(a.geometry, a.values | b.values)


def _circ360(x: float) -> float:
    return ((x % 360.0) + 360.0) % 360.0


@dataclass(frozen=True, slots=True)
class BreakoutPick:
    """One breakout at one measured depth.

    ``width_deg`` is the clockwise angular distance from the left edge to
    the right edge. ``azimuth_deg`` is the pick's characteristic azimuth:
    the edge midpoint for segmentation-derived picks; signal-based
    detectors may place it elsewhere inside the span.
    """

    depth: float
    left_deg: float
    right_deg: float
    width_deg: float
    azimuth_deg: float
    status: str = STATUS_CANDIDATE

    def __post_init__(self):
        for name in ("depth", "left_deg", "right_deg", "width_deg", "azimuth_deg"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if not 0.0 <= self.left_deg < 360.0:
            raise ParameterError(f"left_deg {self.left_deg} outside [0, 360)")
        if not 0.0 <= self.right_deg < 360.0:
            raise ParameterError(f"right_deg {self.right_deg} outside [0, 360)")
        if not 0.0 <= self.azimuth_deg < 360.0:
            raise ParameterError(f"azimuth_deg {self.azimuth_deg} outside [0, 360)")
        if not 0.0 < self.width_deg < 360.0:
            raise ParameterError(f"width_deg {self.width_deg} outside (0, 360)")
        width = _circ360(self.right_deg - self.left_deg)
        if width == 0.0:
            width = 360.0  # left == right can only mean a near-full run
        if abs(width - self.width_deg) > EDGE_CONSISTENCY_TOL_DEG:
            raise ParameterError(
                f"width_deg {self.width_deg} inconsistent with edges "
                f"({self.left_deg}, {self.right_deg}): expected {width}"
            )
        if self.status not in PICK_STATUSES:
            raise ParameterError(f"unknown status {self.status!r}")

    @classmethod
    def from_edges(
        cls,
        depth: float,
        left_deg: float,
        width_deg: float,
        status: str = STATUS_CANDIDATE,
        azimuth_deg: float | None = None,
    ) -> "BreakoutPick":
        """Build a pick from its left edge and width; the right edge and
        (by default) the midpoint azimuth are derived."""
        right = _circ360(left_deg + width_deg)
        if azimuth_deg is None:
            azimuth_deg = _circ360(left_deg + width_deg / 2.0)
        return cls(depth, _circ360(left_deg), right, width_deg, azimuth_deg, status)

    def midpoint_deg(self) -> float:
        return _circ360(self.left_deg + self.width_deg / 2.0)

    def with_status(self, status: str) -> "BreakoutPick":
        # Only the status changes, so the geometric re-validation of
        # __post_init__ is skipped; this runs in per-depth hot loops.
        if status not in PICK_STATUSES:
            raise ParameterError(f"unknown status {status!r}")
        p = object.__new__(BreakoutPick)
        object.__setattr__(p, "depth", self.depth)
        object.__setattr__(p, "left_deg", self.left_deg)
        object.__setattr__(p, "right_deg", self.right_deg)
        object.__setattr__(p, "width_deg", self.width_deg)
        object.__setattr__(p, "azimuth_deg", self.azimuth_deg)
        object.__setattr__(p, "status", status)
        return p


def _pick_key(p: BreakoutPick) -> tuple[float, float]:
    return (p.depth, p.left_deg)


@dataclass(frozen=True, slots=True)
class PickSet:
    """An ordered collection of picks from one origin.

    Picks are kept sorted by (depth, left edge); two picks may not share
    both the depth and the left edge.
    """

    picks: tuple[BreakoutPick, ...]
    source: str = "synthetic"

    def __post_init__(self):
        if self.source not in PICK_SOURCES:
            raise ParameterError(f"unknown source {self.source!r}")
        picks = tuple(sorted(self.picks, key=_pick_key))
        for a, b in zip(picks, picks[1:]):
            if a.depth == b.depth and a.left_deg == b.left_deg:
                raise ParameterError(
                    f"duplicate pick at depth {a.depth}, left {a.left_deg}"
                )
        object.__setattr__(self, "picks", picks)

    def __len__(self) -> int:
        return len(self.picks)

    def __iter__(self):
        return iter(self.picks)

    def depths(self) -> list[float]:
        return sorted({p.depth for p in self.picks})

    def azimuths(self) -> np.ndarray:
        return np.array([p.azimuth_deg for p in self.picks], dtype=float)

    def with_source(self, source: str) -> "PickSet":
        return PickSet(self.picks, source)


EMPTY_PICKS = PickSet((), "synthetic")
