"""Signal-based breakout picking straight from amplitude and radius rows.

A breakout leaves two co-located signatures at a given depth: a drop in
reflected acoustic amplitude and an increase in borehole radius. This
detector smooths each row circularly, thresholds the smoothed signals
against per-row statistics of the raw signals (mean minus/plus a
configurable number of standard deviations), and keeps only zones where
both signatures fire together. Zone edges are the threshold crossings; the
reported azimuth is the smoothed-amplitude minimum inside the zone.

Row-relative thresholds make the detector invariant to tool gain and to
constant offsets, but also blind to full-circumference anomalies
(washouts), which is intended.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d

from .core import (
    STATUS_CANDIDATE,
    BreakoutPick,
    GeometryError,
    GridGeometry,
    ImageLogGrid,
    ParameterError,
    PickSet,
    azimuth_of_column,
)
from .postproc import MIN_WIDTH_DEG, extract_runs
from .validation import validate


@dataclass(frozen=True, slots=True)
class PeakDetectParams:
    smooth_window_deg: float = 15.0
    k_amp: float = 1.0
    k_rad: float = 1.0
    apply_symmetry_validation: bool = False
    min_width_deg: float = MIN_WIDTH_DEG

    def __post_init__(self):
        if self.k_amp <= 0 or self.k_rad <= 0:
            raise ParameterError("k_amp and k_rad must be > 0")
        if self.smooth_window_deg <= 0:
            raise ParameterError("smooth_window_deg must be > 0")


def _window_columns(window_deg: float, g: GridGeometry) -> int:
    w = round(window_deg / g.azimuth_step)
    if w < 1:
        raise ParameterError(
            f"smoothing window {window_deg} deg is narrower than one column"
        )
    w = w if w % 2 == 1 else w + 1  # centered windows need an odd width
    if w > g.n_azimuth:
        raise ParameterError(
            f"smoothing window {window_deg} deg exceeds the full circle"
        )
    return w


def smooth_circular(row: np.ndarray, window_deg: float, g: GridGeometry) -> np.ndarray:
    """Circular moving average of one row; NaN cells are excluded from the
    average (cells whose whole window is NaN stay NaN)."""
    row = np.asarray(row, dtype=float)
    if row.size != g.n_azimuth:
        raise GeometryError(f"row length {row.size} != n_azimuth {g.n_azimuth}")
    w = _window_columns(window_deg, g)
    valid = np.isfinite(row)
    if valid.all():
        return uniform_filter1d(row, size=w, mode="wrap")
    sums = uniform_filter1d(np.where(valid, row, 0.0), size=w, mode="wrap") * w
    counts = uniform_filter1d(valid.astype(float), size=w, mode="wrap") * w
    with np.errstate(invalid="ignore", divide="ignore"):
        out = sums / counts
    out[np.rint(counts) < 1] = np.nan
    return out


def detect_row(
    amp_row: np.ndarray,
    rad_row: np.ndarray,
    params: PeakDetectParams,
    g: GridGeometry,
    depth: float,
) -> list[BreakoutPick]:
    """Detect breakout candidates on one depth row.

    A candidate zone is a circular run where the smoothed amplitude falls
    below mean - k_amp*std AND the smoothed radius rises above
    mean + k_rad*std, with the mean/std taken over the valid cells of the
    raw rows. Zones narrower than the minimum width are dropped.
    """
    amp_row = np.asarray(amp_row, dtype=float)
    rad_row = np.asarray(rad_row, dtype=float)
    if amp_row.size != rad_row.size or amp_row.size != g.n_azimuth:
        raise GeometryError("rows must both match the grid's azimuth count")
    amp_valid = np.isfinite(amp_row)
    rad_valid = np.isfinite(rad_row)
    if not amp_valid.any() or not rad_valid.any():
        warnings.warn(f"row at depth {depth} has no valid cells", stacklevel=2)
        return []
    amp_s = smooth_circular(amp_row, params.smooth_window_deg, g)
    rad_s = smooth_circular(rad_row, params.smooth_window_deg, g)
    amp_thr = np.nanmean(amp_row) - params.k_amp * np.nanstd(amp_row)
    rad_thr = np.nanmean(rad_row) + params.k_rad * np.nanstd(rad_row)
    with np.errstate(invalid="ignore"):
        zone = (amp_s < amp_thr) & (rad_s > rad_thr)
    picks = []
    for run in extract_runs(zone.astype(np.uint8)):
        if run.length >= g.n_azimuth:
            continue  # full-circle anomaly: washout, not a breakout
        width = run.length * 360.0 / g.n_azimuth
        if width < params.min_width_deg:
            continue
        left = azimuth_of_column(run.start_col, g)
        cols = (run.start_col + np.arange(run.length)) % g.n_azimuth
        in_zone = amp_s[cols]
        min_col = int(cols[int(np.nanargmin(in_zone))])
        picks.append(
            BreakoutPick.from_edges(
                depth, left, width, STATUS_CANDIDATE,
                azimuth_deg=azimuth_of_column(min_col, g),
            )
        )
    return picks


def peak_detect(
    amp: ImageLogGrid,
    rad: ImageLogGrid,
    params: PeakDetectParams = PeakDetectParams(),
) -> PickSet:
    """Run the detector over every depth of a dual-channel log.

    With ``apply_symmetry_validation`` set, the azimuthal-symmetry filter
    is applied per native depth and only retained picks are returned.
    """
    if amp.geometry != rad.geometry:
        raise GeometryError("amplitude and radius grids must share geometry")
    g = amp.geometry
    picks = []
    for r in range(g.n_depth):
        picks.extend(
            detect_row(amp.values[r], rad.values[r], params, g, g.depth_of_row(r))
        )
    result = PickSet(tuple(picks), "peak_detect")
    if params.apply_symmetry_validation:
        result = validate(result, g.depth_step).retained
    return result
