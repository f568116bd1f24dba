"""Turn segmentation grids into candidate breakout picks, depth by depth.

Each mask row is read as a one-dimensional binary function of azimuth.
Contiguous intervals of ones (circular, wrapping across the 0/360 boundary)
become candidate breakouts; the left/right interval edges give the width
and the midpoint gives the azimuth. Intervals narrower than
``MIN_WIDTH_DEG`` are discarded as noise-scale features, and full-circle
intervals are treated as washout (azimuth undefined) and yield no pick.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    STATUS_CANDIDATE,
    BreakoutPick,
    GeometryError,
    GridGeometry,
    MaskGrid,
    ParameterError,
    PickSet,
    ProbGrid,
    azimuth_of_column,
)

# Narrower intervals are unlikely to be real breakouts (noise, minor
# spalling, thin fractures, segmentation artifacts).
MIN_WIDTH_DEG = 10.0

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True, slots=True)
class CircularRun:
    """A maximal contiguous interval of ones on a circular row.

    Columns ``start_col .. start_col + length - 1`` (mod row length) are
    all ones; unless the run covers the full circle, the columns on either
    side are zeros.
    """

    start_col: int
    length: int


def binarize(p: ProbGrid, tau: float = DEFAULT_THRESHOLD) -> MaskGrid:
    """Threshold a probability grid: cell = 1 iff probability >= ``tau``."""
    if not 0.0 < tau < 1.0:
        raise ParameterError(f"threshold must lie in (0, 1), got {tau}")
    return MaskGrid(p.geometry, (p.values >= tau).astype(np.uint8))


def extract_runs(row: np.ndarray) -> list[CircularRun]:
    """Find all circular runs of ones in a binary row.

    Runs are returned in increasing ``start_col`` order; a run wrapping
    across the end of the row is reported by its true start column.
    """
    row = np.asarray(row)
    if not np.isin(row, (0, 1)).all():
        raise ParameterError("row values must all be 0 or 1")
    row = row.astype(bool)
    n = row.size
    total = int(row.sum())
    if total == 0:
        return []
    if total == n:
        return [CircularRun(0, n)]
    starts = np.flatnonzero(row & ~np.roll(row, 1))
    ends = np.flatnonzero(row & ~np.roll(row, -1))
    # If the first end precedes the first start, the run through the wrap
    # point owns it; shift the pairing by one.
    if ends[0] < starts[0]:
        ends = np.roll(ends, -1)
    lengths = (ends - starts) % n + 1
    return [CircularRun(int(s), int(l)) for s, l in zip(starts, lengths)]


def run_to_pick(
    run: CircularRun,
    g: GridGeometry,
    depth: float,
    min_width_deg: float = MIN_WIDTH_DEG,
) -> BreakoutPick | None:
    """Convert a run to a candidate pick, or ``None`` if the run is
    narrower than ``min_width_deg`` or covers the full circle (washout)."""
    if run.length >= g.n_azimuth:
        return None
    width = run.length * 360.0 / g.n_azimuth
    if width < min_width_deg:
        return None
    left = azimuth_of_column(run.start_col, g)
    return BreakoutPick.from_edges(depth, left, width, STATUS_CANDIDATE)


def picks_from_mask(
    m: MaskGrid,
    source: str = "segnet",
    min_width_deg: float = MIN_WIDTH_DEG,
) -> PickSet:
    """Extract candidate picks from every row of a mask."""
    g = m.geometry
    picks = []
    for r in range(g.n_depth):
        row = m.values[r]
        if not row.any():
            continue
        depth = g.depth_of_row(r)
        for run in extract_runs(row):
            pick = run_to_pick(run, g, depth, min_width_deg)
            if pick is not None:
                picks.append(pick)
    return PickSet(tuple(picks), source)


def rasterize_picks(s: PickSet, g: GridGeometry) -> MaskGrid:
    """Render picks onto a mask, snapping edges to the column lattice.

    Inverse of :func:`picks_from_mask` for lattice-aligned picks whose runs
    do not touch. Overlapping or abutting picks at one depth merge into a
    single run (a warning is emitted for true overlaps).
    """
    step = g.azimuth_step
    values = np.zeros(g.shape(), dtype=np.uint8)
    for p in s:
        r = round((p.depth - g.depth_start) / g.depth_step)
        if not 0 <= r < g.n_depth or abs(g.depth_of_row(r) - p.depth) > g.depth_step / 2 + 1e-9:
            raise GeometryError(f"pick depth {p.depth} outside grid depth range")
        c0 = round(p.left_deg / step) % g.n_azimuth
        n_cols = min(max(round(p.width_deg / step), 1), g.n_azimuth)
        cols = (c0 + np.arange(n_cols)) % g.n_azimuth
        if values[r, cols].any():
            warnings.warn(
                f"overlapping picks at depth {p.depth}; merging into one run",
                stacklevel=2,
            )
        values[r, cols] = 1
    return MaskGrid(g, values)
