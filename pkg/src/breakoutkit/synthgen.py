"""Parametric synthetic acoustic image logs with exact ground truth.

Scenes are rendered as amplitude + radius grids over a flat noisy
background, with features drawn from the phenomenology of real logs:

* ``BreakoutPair`` - two low-amplitude, enlarged-radius patches on
  opposite walls (the only feature that enters the truth mask);
* ``Keyseat`` - a one-sided groove: looks like half a breakout;
* ``Fracture`` - a sinusoidal low-amplitude band whose radius anomaly is
  *negative* (signal compensation over rough fracture surfaces), which is
  what makes it a hard negative;
* ``ArtifactStripes`` - a pair of vertical low-amplitude stripes 180
  degrees apart over the full depth with no radius anomaly at all
  (tool-eccentricity artifact);
* ``Washout`` - full-circumference enlargement; not a breakout, and
  azimuthally invisible to row-relative detectors.

Feature anomalies taper azimuthally (raised-cosine) so the deepest point
of each anomaly sits at the feature center; the truth mask covers the full
snapped span. Anomaly fields are stamped per feature with later features
overwriting earlier ones where they overlap (a warning is emitted).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import MISSING, dataclass
from pathlib import Path

import numpy as np

from .core import (
    AMPLITUDE,
    RADIUS,
    GridGeometry,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    PickSet,
)
from .postproc import picks_from_mask


@dataclass(frozen=True, slots=True)
class Background:
    amp_mean: float = 120.0
    amp_sigma: float = 6.0
    rad_mean_mm: float = 48.0
    rad_sigma_mm: float = 0.4


@dataclass(frozen=True, slots=True)
class BreakoutPair:
    """Two breakout patches at center_azimuth and center_azimuth + 180 +
    asymmetry."""

    center_azimuth_deg: float
    width_deg: float
    depth_top_m: float
    depth_bottom_m: float
    asymmetry_deg: float = 0.0
    amp_drop: float = 12.0
    radius_gain_mm: float = 5.0


@dataclass(frozen=True, slots=True)
class Keyseat:
    """One-sided drilling groove; breakout look-alike on a single wall."""

    azimuth_deg: float
    width_deg: float
    depth_top_m: float
    depth_bottom_m: float
    amp_drop: float = 12.0
    radius_gain_mm: float = 5.0


@dataclass(frozen=True, slots=True)
class Fracture:
    """Sinusoidal fracture trace: depth(az) = mid_depth + amplitude *
    sin(az + phase), rasterized with a band thickness. Radius is reduced,
    not enlarged."""

    mid_depth_m: float
    sine_amplitude_m: float
    phase_deg: float
    thickness_m: float
    amp_drop: float = 12.0
    radius_drop_mm: float = 4.0


@dataclass(frozen=True, slots=True)
class ArtifactStripes:
    """Paired vertical low-amplitude stripes, 180 degrees apart, spanning
    the full depth; no radius anomaly."""

    azimuth_deg: float
    width_deg: float
    amp_drop: float = 12.0


@dataclass(frozen=True, slots=True)
class Washout:
    """Full-circumference enlargement over a depth interval."""

    depth_top_m: float
    depth_bottom_m: float
    amp_drop: float = 8.0
    radius_gain_mm: float = 10.0


FeatureSpec = BreakoutPair | Keyseat | Fracture | ArtifactStripes | Washout


@dataclass(frozen=True, slots=True)
class SceneSpec:
    geometry: GridGeometry
    background: Background = Background()
    features: tuple[FeatureSpec, ...] = ()
    speckle_level: float = 1.0
    seed: int = 0
    keyseat_in_truth: bool = False

    def __post_init__(self):
        if self.speckle_level < 0:
            raise ParameterError("speckle_level must be >= 0")
        g = self.geometry
        lo = g.depth_start
        hi = g.depth_of_row(g.n_depth - 1)
        for f in self.features:
            width = getattr(f, "width_deg", None)
            if width is not None and not 0.0 < width < 180.0:
                raise ParameterError(f"feature width {width} outside (0, 180)")
            for attr in ("depth_top_m", "depth_bottom_m", "mid_depth_m"):
                d = getattr(f, attr, None)
                if d is not None and not lo <= d <= hi:
                    raise ParameterError(f"feature depth {d} outside grid [{lo}, {hi}]")
            top = getattr(f, "depth_top_m", None)
            bottom = getattr(f, "depth_bottom_m", None)
            if top is not None and bottom is not None and top > bottom:
                raise ParameterError(f"feature depth span inverted: {top} > {bottom}")


def _row_range(g: GridGeometry, top_m: float, bottom_m: float) -> range:
    r0 = max(0, math.ceil((top_m - g.depth_start) / g.depth_step - 1e-9))
    r1 = min(g.n_depth - 1, math.floor((bottom_m - g.depth_start) / g.depth_step + 1e-9))
    return range(r0, r1 + 1)


def _patch_columns(g: GridGeometry, center_deg: float, width_deg: float):
    """Column indices of an azimuthal patch, plus the raised-cosine taper
    weights across it (1 at the center, falling toward the edges)."""
    step = g.azimuth_step
    n_cols = max(1, round(width_deg / step))
    left_col = round((center_deg - width_deg / 2.0) / step)
    cols = (left_col + np.arange(n_cols)) % g.n_azimuth
    u = (np.arange(n_cols) + 0.5) / n_cols * 2.0 - 1.0  # -1..1 across the patch
    taper = np.cos(u * math.pi / 2.0) ** 2
    return cols, taper


def _stamp(
    d_amp: np.ndarray,
    d_rad: np.ndarray,
    occupied: np.ndarray,
    rows,
    cols,
    amp_values,
    rad_values,
) -> bool:
    """Overwrite the anomaly fields on ``rows x cols``; returns True if any
    cell was already claimed by an earlier feature."""
    rows = np.asarray(list(rows))
    if rows.size == 0 or np.size(cols) == 0:
        return False
    idx = np.ix_(rows, cols)
    overlap = bool(occupied[idx].any())
    d_amp[idx] = amp_values
    d_rad[idx] = rad_values
    occupied[idx] = True
    return overlap


def render(
    spec: SceneSpec,
) -> tuple[ImageLogGrid, ImageLogGrid, MaskGrid, PickSet]:
    """Render a scene to (amplitude, radius, truth mask, truth picks).

    Deterministic for a given spec. The truth mask covers breakout-pair
    cells (and keyseat cells when ``keyseat_in_truth`` is set); truth picks
    are extracted from the mask, so mask and picks are consistent by
    construction.
    """
    g = spec.geometry
    bg = spec.background
    rng = np.random.default_rng(spec.seed)
    amp = bg.amp_mean + bg.amp_sigma * spec.speckle_level * rng.standard_normal(g.shape())
    rad = bg.rad_mean_mm + bg.rad_sigma_mm * rng.standard_normal(g.shape())

    d_amp = np.zeros(g.shape())
    d_rad = np.zeros(g.shape())
    occupied = np.zeros(g.shape(), dtype=bool)
    mask = np.zeros(g.shape(), dtype=np.uint8)
    overlapped = False

    for feat in spec.features:
        if isinstance(feat, BreakoutPair):
            rows = _row_range(g, feat.depth_top_m, feat.depth_bottom_m)
            centers = (
                feat.center_azimuth_deg,
                feat.center_azimuth_deg + 180.0 + feat.asymmetry_deg,
            )
            for center in centers:
                cols, taper = _patch_columns(g, center, feat.width_deg)
                overlapped |= _stamp(
                    d_amp, d_rad, occupied, rows, cols,
                    -feat.amp_drop * taper, feat.radius_gain_mm * taper,
                )
                mask[np.ix_(list(rows), cols)] = 1
        elif isinstance(feat, Keyseat):
            rows = _row_range(g, feat.depth_top_m, feat.depth_bottom_m)
            cols, taper = _patch_columns(g, feat.azimuth_deg, feat.width_deg)
            overlapped |= _stamp(
                d_amp, d_rad, occupied, rows, cols,
                -feat.amp_drop * taper, feat.radius_gain_mm * taper,
            )
            if spec.keyseat_in_truth:
                mask[np.ix_(list(rows), cols)] = 1
        elif isinstance(feat, ArtifactStripes):
            rows = range(g.n_depth)
            for center in (feat.azimuth_deg, feat.azimuth_deg + 180.0):
                cols, taper = _patch_columns(g, center, feat.width_deg)
                overlapped |= _stamp(
                    d_amp, d_rad, occupied, rows, cols, -feat.amp_drop * taper, 0.0
                )
        elif isinstance(feat, Washout):
            rows = _row_range(g, feat.depth_top_m, feat.depth_bottom_m)
            cols = np.arange(g.n_azimuth)
            overlapped |= _stamp(
                d_amp, d_rad, occupied, rows, cols, -feat.amp_drop, feat.radius_gain_mm
            )
        elif isinstance(feat, Fracture):
            az = (np.arange(g.n_azimuth) + 0.5) * g.azimuth_step
            trace = feat.mid_depth_m + feat.sine_amplitude_m * np.sin(
                np.deg2rad(az + feat.phase_deg)
            )
            depths = g.depth_start + np.arange(g.n_depth)[:, None] * g.depth_step
            band = np.abs(depths - trace[None, :]) <= feat.thickness_m / 2.0
            overlapped |= bool((occupied & band).any())
            d_amp[band] = -feat.amp_drop
            d_rad[band] = -feat.radius_drop_mm
            occupied |= band
        else:
            raise ParameterError(f"unknown feature {feat!r}")

    if overlapped:
        warnings.warn("overlapping features: later features win", stacklevel=2)

    amp = (amp + d_amp).astype(np.float32)
    rad = np.maximum(rad + d_rad, 0.1).astype(np.float32)
    amplitude = ImageLogGrid(g, AMPLITUDE, amp)
    radius = ImageLogGrid(g, RADIUS, rad)
    truth_mask = MaskGrid(g, mask)
    truth_picks = picks_from_mask(truth_mask, source="synthetic")
    return amplitude, radius, truth_mask, truth_picks


SUITE_GEOMETRY = GridGeometry(n_depth=256, n_azimuth=720, depth_start=100.0, depth_step=0.1)

SCENE_NAMES = (
    "clean_pair",
    "keyseat",
    "fracture",
    "artifact",
    "mixed",
    "washout",
    "asymmetric_pair",
)


def scene_suite(name: str) -> SceneSpec:
    """Canonical fixed-seed regression scenes.

    All scenes share a 256-row x 720-column grid (0.5 degree columns, so
    half-degree feature edges land exactly on the lattice) spanning depths
    100.0 to 125.5 m at a 0.1 m step.
    """
    g = SUITE_GEOMETRY
    pair = BreakoutPair(
        center_azimuth_deg=143.0, width_deg=45.0,
        depth_top_m=102.0, depth_bottom_m=112.0,
        amp_drop=15.0, radius_gain_mm=6.0,
    )
    keyseat = Keyseat(
        azimuth_deg=60.0, width_deg=30.0,
        depth_top_m=115.0, depth_bottom_m=118.5,
        amp_drop=14.0, radius_gain_mm=5.0,
    )
    fracture = Fracture(
        mid_depth_m=121.0, sine_amplitude_m=0.8, phase_deg=20.0,
        thickness_m=0.3, amp_drop=13.0, radius_drop_mm=4.0,
    )
    artifact = ArtifactStripes(azimuth_deg=100.0, width_deg=12.0, amp_drop=12.0)
    if name == "clean_pair":
        return SceneSpec(g, features=(pair,), speckle_level=0.5, seed=101)
    if name == "keyseat":
        return SceneSpec(g, features=(keyseat,), speckle_level=0.5, seed=102)
    if name == "fracture":
        return SceneSpec(g, features=(fracture,), speckle_level=0.5, seed=103)
    if name == "artifact":
        return SceneSpec(g, features=(artifact,), speckle_level=0.5, seed=104)
    if name == "washout":
        return SceneSpec(
            g, features=(Washout(depth_top_m=112.0, depth_bottom_m=118.0),),
            speckle_level=0.5, seed=105,
        )
    if name == "mixed":
        return SceneSpec(
            g, features=(pair, keyseat, fracture, artifact),
            speckle_level=0.5, seed=106,
        )
    if name == "asymmetric_pair":
        asym = BreakoutPair(
            center_azimuth_deg=143.0, width_deg=45.0,
            depth_top_m=102.0, depth_bottom_m=112.0,
            asymmetry_deg=30.0, amp_drop=15.0, radius_gain_mm=6.0,
        )
        return SceneSpec(g, features=(asym,), speckle_level=0.5, seed=107)
    raise ParameterError(f"unknown scene {name!r}; known: {', '.join(SCENE_NAMES)}")


# --- flat key-value scene config ------------------------------------------

_FEATURE_KINDS = {
    "breakout_pair": BreakoutPair,
    "keyseat": Keyseat,
    "fracture": Fracture,
    "artifact_stripes": ArtifactStripes,
    "washout": Washout,
}
_KIND_NAMES = {v: k for k, v in _FEATURE_KINDS.items()}


def format_scene_config(spec: SceneSpec) -> str:
    """Serialize a scene as ``key = value`` lines (one feature field per
    ``feature.<n>.<field>`` line)."""
    g = spec.geometry
    bg = spec.background
    lines = [
        f"geometry.n_depth = {g.n_depth}",
        f"geometry.n_azimuth = {g.n_azimuth}",
        f"geometry.depth_start = {g.depth_start!r}",
        f"geometry.depth_step = {g.depth_step!r}",
        f"background.amp_mean = {bg.amp_mean!r}",
        f"background.amp_sigma = {bg.amp_sigma!r}",
        f"background.rad_mean_mm = {bg.rad_mean_mm!r}",
        f"background.rad_sigma_mm = {bg.rad_sigma_mm!r}",
        f"speckle_level = {spec.speckle_level!r}",
        f"seed = {spec.seed}",
        f"keyseat_in_truth = {str(spec.keyseat_in_truth).lower()}",
    ]
    for i, feat in enumerate(spec.features):
        lines.append(f"feature.{i}.kind = {_KIND_NAMES[type(feat)]}")
        for name in feat.__dataclass_fields__:
            lines.append(f"feature.{i}.{name} = {getattr(feat, name)!r}")
    return "\n".join(lines) + "\n"


def parse_scene_config(text: str) -> SceneSpec:
    """Parse the flat key-value grammar emitted by
    :func:`format_scene_config`. Lines are ``key = value``; blank lines and
    ``#`` comments are ignored."""
    flat: dict[str, str] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in flat:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        flat[key] = value

    def take(key: str, default=None) -> str:
        if key in flat:
            return flat.pop(key)
        if default is None:
            raise ParameterError(f"missing required key {key!r}")
        return default

    geometry = GridGeometry(
        n_depth=int(take("geometry.n_depth")),
        n_azimuth=int(take("geometry.n_azimuth")),
        depth_start=float(take("geometry.depth_start")),
        depth_step=float(take("geometry.depth_step")),
    )
    background = Background(
        amp_mean=float(take("background.amp_mean", "120.0")),
        amp_sigma=float(take("background.amp_sigma", "6.0")),
        rad_mean_mm=float(take("background.rad_mean_mm", "48.0")),
        rad_sigma_mm=float(take("background.rad_sigma_mm", "0.4")),
    )
    speckle = float(take("speckle_level", "1.0"))
    seed = int(take("seed", "0"))
    keyseat_in_truth = take("keyseat_in_truth", "false").lower() == "true"

    features: list[FeatureSpec] = []
    indices = sorted(
        {int(k.split(".")[1]) for k in flat if k.startswith("feature.")}
    )
    for i in indices:
        prefix = f"feature.{i}."
        kind = take(prefix + "kind")
        if kind not in _FEATURE_KINDS:
            raise ParameterError(f"unknown feature kind {kind!r}")
        cls = _FEATURE_KINDS[kind]
        kwargs = {}
        for name, f in cls.__dataclass_fields__.items():
            key = prefix + name
            if key in flat:
                kwargs[name] = float(flat.pop(key))
            elif f.default is MISSING:
                raise ParameterError(f"missing required key {key!r}")
        features.append(cls(**kwargs))
    if flat:
        raise ParameterError(f"unrecognized keys: {sorted(flat)}")
    return SceneSpec(
        geometry, background, tuple(features), speckle, seed, keyseat_in_truth
    )


def load_scene(name_or_path: str) -> SceneSpec:
    """Resolve a scene by suite name or config file path."""
    if name_or_path in SCENE_NAMES:
        return scene_suite(name_or_path)
    path = Path(name_or_path)
    if path.exists():
        return parse_scene_config(path.read_text(encoding="utf-8"))
    raise ParameterError(
        f"{name_or_path!r} is neither a known scene nor an existing config file"
    )
