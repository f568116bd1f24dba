"""Quantitative evaluation of automatic picks against manual annotations.

The toolbox here covers mask-level agreement (IoU), pick-level matching on
a uniform depth grid with false positive/negative rates, circular statistics
of breakout azimuths, a World Stress Map C-quality check, and a reference
implementation of the class-balanced binary cross-entropy used to train
segmentation networks on strongly imbalanced breakout labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BreakoutPick,
    GeometryError,
    MaskGrid,
    ParameterError,
    PickSet,
    ProbGrid,
)
from .validation import circ360

EVAL_DEPTH_STEP = 0.2  # meters; uniform sampling interval for comparisons
DEFAULT_AZ_TOL_DEG = 30.0

WSM_MIN_ZONES = 4
WSM_MIN_COMBINED_LENGTH_M = 20.0
WSM_MAX_STD_DEG = 25.0
RANK_C_OR_BETTER = "C_or_better"
RANK_BELOW_C = "below_C"

BCE_EPS = 1e-7


def iou(pred: MaskGrid, label: MaskGrid) -> float:
    """Intersection over union of two masks; 1.0 when both are empty."""
    if pred.geometry != label.geometry:
        raise GeometryError("iou requires identical geometry")
    p = pred.values.astype(bool)
    l = label.values.astype(bool)
    union = int((p | l).sum())
    if union == 0:
        return 1.0
    return int((p & l).sum()) / union


def circ_diff(a: float, b: float) -> float:
    """Shortest angular distance between two azimuths, in [0, 180]."""
    d = circ360(a - b)
    return min(d, 360.0 - d)


def resample_picks(s: PickSet, step: float = EVAL_DEPTH_STEP) -> PickSet:
    """Resample picks onto a uniform depth grid.

    The depth axis is tiled with bins ``[k*step, (k+1)*step)``. For each
    bin holding at least one native depth with picks, the picks of the
    native depth nearest the bin center are emitted at the bin-center
    depth; other native depths in the bin are dropped. Identity when the
    native depths already sit at bin centers. Ties go to the shallower
    depth.
    """
    if not step > 0:
        raise ParameterError(f"step must be > 0, got {step}")
    by_depth: dict[float, list[BreakoutPick]] = {}
    for p in s:
        by_depth.setdefault(p.depth, []).append(p)
    chosen: dict[int, float] = {}
    for depth in sorted(by_depth):
        k = math.floor(depth / step)
        center = (k + 0.5) * step
        if k not in chosen or abs(depth - center) < abs(chosen[k] - center):
            chosen[k] = depth
    out = []
    tol = step * 1e-6  # keep the native float when it already is the center
    for k, depth in chosen.items():
        center = (k + 0.5) * step
        emit_depth = depth if abs(depth - center) <= tol else center
        for p in by_depth[depth]:
            out.append(
                BreakoutPick(
                    emit_depth, p.left_deg, p.right_deg, p.width_deg,
                    p.azimuth_deg, p.status,
                )
            )
    return PickSet(tuple(out), s.source)


@dataclass(frozen=True, slots=True)
class MatchResult:
    """Pairing of automatic picks with manual picks at common depths."""

    matched: tuple[tuple[BreakoutPick, BreakoutPick], ...]
    false_positives: tuple[BreakoutPick, ...]
    false_negatives: tuple[BreakoutPick, ...]

    @property
    def n_auto(self) -> int:
        return len(self.matched) + len(self.false_positives)

    @property
    def n_manual(self) -> int:
        return len(self.matched) + len(self.false_negatives)


def _depth_key(depth: float) -> float:
    # Depth values pass through a 6-decimal CSV representation; keying on
    # the rounded value keeps in-memory and round-tripped sets congruent.
    return round(depth, 6)


def match_picks(
    auto: PickSet, manual: PickSet, az_tol_deg: float = DEFAULT_AZ_TOL_DEG
) -> MatchResult:
    """Greedily pair automatic and manual picks within each depth group.

    Within a depth group, candidate pairs are taken in increasing order of
    azimuthal distance; a pair matches only if that distance is at most
    ``az_tol_deg``. Leftover automatic picks are false positives, leftover
    manual picks false negatives.
    """
    if az_tol_deg < 0:
        raise ParameterError("az_tol_deg must be >= 0")
    auto_by_depth: dict[float, list[BreakoutPick]] = {}
    for p in auto:
        auto_by_depth.setdefault(_depth_key(p.depth), []).append(p)
    manual_by_depth: dict[float, list[BreakoutPick]] = {}
    for p in manual:
        manual_by_depth.setdefault(_depth_key(p.depth), []).append(p)

    matched: list[tuple[BreakoutPick, BreakoutPick]] = []
    false_pos: list[BreakoutPick] = []
    false_neg: list[BreakoutPick] = []
    for depth in sorted(set(auto_by_depth) | set(manual_by_depth)):
        a_list = auto_by_depth.get(depth, [])
        m_list = manual_by_depth.get(depth, [])
        pairs = sorted(
            (circ_diff(a.azimuth_deg, m.azimuth_deg), i, j)
            for i, a in enumerate(a_list)
            for j, m in enumerate(m_list)
        )
        used_a: set[int] = set()
        used_m: set[int] = set()
        for d, i, j in pairs:
            if d > az_tol_deg:
                break
            if i in used_a or j in used_m:
                continue
            used_a.add(i)
            used_m.add(j)
            matched.append((a_list[i], m_list[j]))
        false_pos.extend(a for i, a in enumerate(a_list) if i not in used_a)
        false_neg.extend(m for j, m in enumerate(m_list) if j not in used_m)
    return MatchResult(tuple(matched), tuple(false_pos), tuple(false_neg))


def rates(m: MatchResult) -> tuple[float, float]:
    """(false positive rate, false negative rate).

    FPR is the fraction of automatic picks left unmatched; FNR is the
    fraction of manual picks left unmatched. Empty denominators give 0.
    """
    fpr = len(m.false_positives) / m.n_auto if m.n_auto else 0.0
    fnr = len(m.false_negatives) / m.n_manual if m.n_manual else 0.0
    return fpr, fnr


def pick_errors(m: MatchResult) -> tuple[float, float] | None:
    """Mean azimuth error (circular) and mean absolute width error over
    matched pairs; ``None`` when nothing matched."""
    if not m.matched:
        return None
    az = float(np.mean([circ_diff(a.azimuth_deg, b.azimuth_deg) for a, b in m.matched]))
    w = float(np.mean([abs(a.width_deg - b.width_deg) for a, b in m.matched]))
    return az, w


def circular_stats(azimuths) -> tuple[float, float]:
    """Directional mean and standard deviation of azimuths, in degrees.

    The mean is the direction of the resultant vector, mapped to [0, 360);
    the standard deviation is sqrt(-2 ln Rbar) converted to degrees, where
    Rbar is the mean resultant length. For Rbar ~ 0 (no preferred
    direction) the mean is undefined and returned as NaN with an infinite
    standard deviation.
    """
    az = np.asarray(azimuths, dtype=float)
    if az.size == 0:
        raise ParameterError("circular_stats requires at least one azimuth")
    rad = np.deg2rad(az)
    sin_sum = float(np.sum(np.sin(rad)))
    cos_sum = float(np.sum(np.cos(rad)))
    rbar = math.hypot(sin_sum, cos_sum) / az.size
    if rbar < 1e-12:
        return math.nan, math.inf
    mean = circ360(math.degrees(math.atan2(sin_sum, cos_sum)))
    std = math.degrees(math.sqrt(-2.0 * math.log(min(rbar, 1.0))))
    return mean, std


def arithmetic_stats(azimuths) -> tuple[float, float]:
    """Plain (non-circular) mean and population standard deviation; only
    meaningful when the azimuths do not straddle the 0/360 boundary."""
    az = np.asarray(azimuths, dtype=float)
    if az.size == 0:
        raise ParameterError("arithmetic_stats requires at least one azimuth")
    return float(az.mean()), float(az.std())


def axial_stats(azimuths) -> tuple[float, float]:
    """Orientation (axial) mean and standard deviation, in degrees.

    A breakout azimuth is an orientation: the two walls of one breakout
    pair sit ~180 degrees apart but mark the same stress direction, so phi
    and phi + 180 must be treated as equal. Angles are doubled, directional
    statistics taken, and the results halved; the mean lands in [0, 180).
    Plain directional statistics (:func:`circular_stats`) degenerate on
    such diametrally paired data.
    """
    az = np.asarray(azimuths, dtype=float)
    mean2, std2 = circular_stats((2.0 * az) % 360.0)
    return mean2 / 2.0, std2 / 2.0


def breakout_zones(s: PickSet, native_step: float) -> list[tuple[float, float]]:
    """Group picked depths into contiguous zones.

    Depths with picks that are adjacent on the native grid (spacing equal
    to ``native_step``) belong to one zone. Each returned (top, bottom)
    zone spans the full cell extent, i.e. a single-depth zone has length
    ``native_step``.
    """
    if not native_step > 0:
        raise ParameterError("native_step must be > 0")
    depths = s.depths()
    if not depths:
        return []
    zones = []
    half = native_step / 2.0
    start = prev = depths[0]
    for d in depths[1:]:
        if d - prev <= native_step * 1.5:  # same zone: adjacent rows
            prev = d
            continue
        zones.append((start - half, prev + half))
        start = prev = d
    zones.append((start - half, prev + half))
    return zones


def wsm_quality(s: PickSet, native_step: float) -> str:
    """World Stress Map quality check for a breakout data set.

    C-or-better requires at least four distinct breakout zones, at least
    20 m of combined zone length, and an azimuth standard deviation below
    25 degrees. The deviation is axial (orientation) standard deviation:
    both walls of a pair mark one stress direction.
    """
    zones = breakout_zones(s, native_step)
    if len(zones) < WSM_MIN_ZONES:
        return RANK_BELOW_C
    combined = sum(bottom - top for top, bottom in zones)
    if combined < WSM_MIN_COMBINED_LENGTH_M:
        return RANK_BELOW_C
    _, std = axial_stats(s.azimuths())
    if not std < WSM_MAX_STD_DEG:
        return RANK_BELOW_C
    return RANK_C_OR_BETTER


def balanced_bce(y, p) -> tuple[float, float]:
    """Class-balanced binary cross-entropy, summed over all pixels.

    ``beta`` is the fraction of background (zero-label) pixels; it weights
    the positive-pixel term so sparse breakout regions are not drowned out
    by the background:

        loss = -beta * sum(y * ln p) - sum((1 - y) * ln(1 - p))

    Accepts mask/probability grids or plain arrays of the same shape.
    Probabilities are clamped to [1e-7, 1 - 1e-7]. Returns (beta, loss).
    """
    if isinstance(y, MaskGrid) and isinstance(p, ProbGrid):
        if y.geometry != p.geometry:
            raise GeometryError("balanced_bce requires identical geometry")
        yv, pv = y.values, p.values
    else:
        yv = np.asarray(y, dtype=float)
        pv = np.asarray(p, dtype=float)
        if yv.shape != pv.shape:
            raise GeometryError(f"shape mismatch: {yv.shape} vs {pv.shape}")
    yv = yv.astype(np.float64).ravel()
    pv = np.clip(pv.astype(np.float64).ravel(), BCE_EPS, 1.0 - BCE_EPS)
    n = yv.size
    beta = float(np.sum(1.0 - yv) / n)
    loss = float(-beta * np.sum(yv * np.log(pv)) - np.sum((1.0 - yv) * np.log1p(-pv)))
    return beta, loss


def rose_histogram(azimuths, bin_deg: float = 10.0) -> list[tuple[float, int]]:
    """Counts of azimuths per angular bin, as (bin_start_deg, count) rows
    covering the full circle."""
    if not 0 < bin_deg <= 360 or 360.0 % bin_deg != 0:
        raise ParameterError("bin_deg must divide 360")
    n_bins = int(round(360.0 / bin_deg))
    counts = [0] * n_bins
    for a in azimuths:
        counts[int(circ360(float(a)) // bin_deg) % n_bins] += 1
    return [(i * bin_deg, c) for i, c in enumerate(counts)]


def rose_csv(azimuths, bin_deg: float = 10.0) -> str:
    lines = ["bin_start_deg,count"]
    lines += [f"{start:g},{count}" for start, count in rose_histogram(azimuths, bin_deg)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class EvaluationReport:
    """All comparison metrics for one automatic method on one borehole."""

    iou: float | None
    azimuth_mean_deg: float | None
    azimuth_std_deg: float | None
    azimuth_error_deg: float | None
    width_error_deg: float | None
    fpr: float
    fnr: float
    wsm_rank: str
    n_auto: int
    n_manual: int
    n_matched: int

    def to_dict(self) -> dict:
        d = {
            "azimuth_mean_deg": self.azimuth_mean_deg,
            "azimuth_std_deg": self.azimuth_std_deg,
            "azimuth_error_deg": self.azimuth_error_deg,
            "width_error_deg": self.width_error_deg,
            "fpr": self.fpr,
            "fnr": self.fnr,
            "wsm_rank": self.wsm_rank,
            "n_auto": self.n_auto,
            "n_manual": self.n_manual,
            "n_matched": self.n_matched,
        }
        if self.iou is not None:
            d["iou"] = self.iou
        return d

    def to_json(self) -> str:
        return json.dumps({"schema": 1, **self.to_dict()}, indent=2, sort_keys=True)


def evaluate_picks(
    auto: PickSet,
    manual: PickSet,
    az_tol_deg: float = DEFAULT_AZ_TOL_DEG,
    grid_step: float = EVAL_DEPTH_STEP,
    pred: MaskGrid | None = None,
    label: MaskGrid | None = None,
) -> EvaluationReport:
    """Build the full evaluation report for an automatic pick set.

    Both pick sets must already sit on a common depth grid of step
    ``grid_step`` (see :func:`resample_picks`). The reported azimuth
    mean/std are orientation (axial) statistics in [0, 180). IoU is
    included only when both segmentation grids are supplied.
    """
    m = match_picks(auto, manual, az_tol_deg)
    fpr, fnr = rates(m)
    errors = pick_errors(m)
    if len(auto):
        # orientation statistics: diametral pair members fold together
        az_mean, az_std = axial_stats(auto.azimuths())
        az_std = az_std if math.isfinite(az_std) else None
        az_mean = az_mean if math.isfinite(az_mean) else None
    else:
        az_mean = az_std = None
    grid_iou = None
    if pred is not None and label is not None:
        grid_iou = iou(pred, label)
    return EvaluationReport(
        iou=grid_iou,
        azimuth_mean_deg=az_mean,
        azimuth_std_deg=az_std,
        azimuth_error_deg=None if errors is None else errors[0],
        width_error_deg=None if errors is None else errors[1],
        fpr=fpr,
        fnr=fnr,
        wsm_rank=wsm_quality(auto, grid_step),
        n_auto=len(auto),
        n_manual=len(manual),
        n_matched=len(m.matched),
    )
