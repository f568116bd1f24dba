"""Seeded geometric augmentation of training patches.

A training sample is a 256 x 256 depth-azimuth patch triplet (amplitude,
radius, binary label) with a polarity: positive patches contain breakout
pixels, negative patches are breakout-free hard negatives (keyseats,
fractures, artifacts) whose labels are all zero.

Operators:

* depth flip - reverses the depth axis of all three patches;
* azimuthal shift - circular roll of all three patches, wrapping across
  the 0/360 boundary, with the angle quantized to whole columns;
* crop-and-enlarge (positive samples only) - a random subwindow that
  still contains label pixels is resized back to the patch size, nearest
  neighbor for the label and bilinear for the signals.

The default recipes quintuple each polarity: positives get
{identity, flip, shift, shift, crop}, negatives {identity, flip, shift,
shift, shift}. Every sample draws its randomness from a child seed of
(seed, sample index), so outputs are reproducible regardless of
processing order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .core import (
    AMPLITUDE,
    RADIUS,
    GridGeometry,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    ParseError,
)
from .gridio import read_grid, write_grid

PATCH_SIZE = 256
POSITIVE = "positive"
NEGATIVE = "negative"

OP_IDENTITY = "identity"
OP_FLIP = "flip"
OP_SHIFT = "shift"
OP_CROP = "crop"

SHIFT_RANGE_DEG = (45.0, 135.0)
CROP_SIZE_RANGE = (128, 256)

DEFAULT_POSITIVE_OPS = (OP_IDENTITY, OP_FLIP, OP_SHIFT, OP_SHIFT, OP_CROP)
DEFAULT_NEGATIVE_OPS = (OP_IDENTITY, OP_FLIP, OP_SHIFT, OP_SHIFT, OP_SHIFT)


@dataclass(frozen=True, slots=True)
class TrainingSample:
    amplitude: np.ndarray
    radius: np.ndarray
    label: np.ndarray
    polarity: str
    geometry: GridGeometry

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=np.float32)
        rad = np.asarray(self.radius, dtype=np.float32)
        lab = np.asarray(self.label)
        if not (amp.shape == rad.shape == lab.shape == self.geometry.shape()):
            raise ParameterError("sample patches must all share the geometry shape")
        if not np.isin(lab, (0, 1)).all():
            raise ParameterError("label values must all be 0 or 1")
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise ParameterError(f"unknown polarity {self.polarity!r}")
        if self.polarity == NEGATIVE and lab.any():
            raise ParameterError("negative samples must have all-zero labels")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "radius", rad)
        object.__setattr__(self, "label", lab.astype(np.uint8))
        for arr in (self.amplitude, self.radius, self.label):
            arr.setflags(write=False)


@dataclass(frozen=True, slots=True)
class AugmentConfig:
    positive_ops: tuple[str, ...] = DEFAULT_POSITIVE_OPS
    negative_ops: tuple[str, ...] = DEFAULT_NEGATIVE_OPS
    shift_range_deg: tuple[float, float] = SHIFT_RANGE_DEG

    def __post_init__(self):
        known = {OP_IDENTITY, OP_FLIP, OP_SHIFT, OP_CROP}
        for op in self.positive_ops + self.negative_ops:
            if op not in known:
                raise ParameterError(f"unknown augmentation op {op!r}")
        if OP_CROP in self.negative_ops:
            raise ParameterError("crop is not applicable to negative samples")
        lo, hi = self.shift_range_deg
        if not 0 < lo <= hi < 360:
            raise ParameterError(f"bad shift range {self.shift_range_deg}")


def flip_depth(s: TrainingSample) -> TrainingSample:
    """Reverse the depth axis of all three patches."""
    return replace(
        s,
        amplitude=s.amplitude[::-1].copy(),
        radius=s.radius[::-1].copy(),
        label=s.label[::-1].copy(),
    )


def shift_azimuth(s: TrainingSample, theta_deg: float) -> TrainingSample:
    """Circularly shift all three patches by ``theta_deg`` (quantized to
    whole columns); content at azimuth a moves to a + theta."""
    k = round(theta_deg / s.geometry.azimuth_step)
    return replace(
        s,
        amplitude=np.roll(s.amplitude, k, axis=1),
        radius=np.roll(s.radius, k, axis=1),
        label=np.roll(s.label, k, axis=1),
    )


def _resize_bilinear(arr: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    if arr.shape == shape:
        return arr.copy()
    out_r, out_c = shape
    in_r, in_c = arr.shape
    # Half-pixel-center mapping from output to input coordinates.
    rows = np.clip((np.arange(out_r) + 0.5) * in_r / out_r - 0.5, 0, in_r - 1)
    cols = np.clip((np.arange(out_c) + 0.5) * in_c / out_c - 0.5, 0, in_c - 1)
    r0 = np.floor(rows).astype(int)
    c0 = np.floor(cols).astype(int)
    r1 = np.minimum(r0 + 1, in_r - 1)
    c1 = np.minimum(c0 + 1, in_c - 1)
    fr = (rows - r0)[:, None]
    fc = (cols - c0)[None, :]
    a = arr[np.ix_(r0, c0)]
    b = arr[np.ix_(r0, c1)]
    c = arr[np.ix_(r1, c0)]
    d = arr[np.ix_(r1, c1)]
    top = a * (1 - fc) + b * fc
    bot = c * (1 - fc) + d * fc
    return (top * (1 - fr) + bot * fr).astype(arr.dtype)


def _resize_nearest(arr: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    if arr.shape == shape:
        return arr.copy()
    out_r, out_c = shape
    in_r, in_c = arr.shape
    rows = np.minimum(((np.arange(out_r) + 0.5) * in_r / out_r).astype(int), in_r - 1)
    cols = np.minimum(((np.arange(out_c) + 0.5) * in_c / out_c).astype(int), in_c - 1)
    return arr[np.ix_(rows, cols)]


def crop_enlarge(s: TrainingSample, rng_seed) -> TrainingSample:
    """Crop a random label-bearing subwindow and resize it back up.

    Only defined for positive samples: cropping a negative could cut away
    or distort exactly the hard-negative structure it is meant to teach.
    """
    if s.polarity != POSITIVE:
        raise ParameterError("crop_enlarge applies to positive samples only")
    if not s.label.any():
        raise ParameterError("positive sample has an empty label")
    rng = np.random.default_rng(rng_seed)
    n_r, n_c = s.geometry.shape()
    lo = min(CROP_SIZE_RANGE[0], n_r, n_c)
    h = int(rng.integers(lo, min(CROP_SIZE_RANGE[1], n_r) + 1))
    w = int(rng.integers(lo, min(CROP_SIZE_RANGE[1], n_c) + 1))
    label_rows, label_cols = np.nonzero(s.label)
    for _ in range(64):
        r0 = int(rng.integers(0, n_r - h + 1))
        c0 = int(rng.integers(0, n_c - w + 1))
        if s.label[r0 : r0 + h, c0 : c0 + w].any():
            break
    else:
        # Anchor the window on a random labeled pixel.
        i = int(rng.integers(0, label_rows.size))
        r0 = int(np.clip(label_rows[i] - h // 2, 0, n_r - h))
        c0 = int(np.clip(label_cols[i] - w // 2, 0, n_c - w))
    window = (slice(r0, r0 + h), slice(c0, c0 + w))
    shape = s.geometry.shape()
    return replace(
        s,
        amplitude=_resize_bilinear(s.amplitude[window], shape),
        radius=_resize_bilinear(s.radius[window], shape),
        label=_resize_nearest(s.label[window], shape),
    )


def _apply_op(s: TrainingSample, op: str, rng: np.random.Generator,
              config: AugmentConfig) -> TrainingSample:
    if op == OP_IDENTITY:
        return s
    if op == OP_FLIP:
        return flip_depth(s)
    if op == OP_SHIFT:
        lo, hi = config.shift_range_deg
        return shift_azimuth(s, float(rng.uniform(lo, hi)))
    if op == OP_CROP:
        return crop_enlarge(s, rng.integers(0, 2**63 - 1))
    raise ParameterError(f"unknown augmentation op {op!r}")


def augment_sample(
    s: TrainingSample, config: AugmentConfig, seed: int, index: int
) -> list[TrainingSample]:
    """All augmented variants of one sample, deterministic in (seed, index)."""
    ops = config.positive_ops if s.polarity == POSITIVE else config.negative_ops
    rng = np.random.default_rng([seed, index])
    return [_apply_op(s, op, rng, config) for op in ops]


def augment_set(
    samples: list[TrainingSample],
    config: AugmentConfig = AugmentConfig(),
    seed: int = 0,
) -> list[TrainingSample]:
    """Expand a sample list with the per-polarity augmentation recipes.

    With the default recipes, every input yields five outputs (the
    original plus four variants).
    """
    out: list[TrainingSample] = []
    for i, s in enumerate(samples):
        out.extend(augment_sample(s, config, seed, i))
    return out


MANIFEST_HEADER = "sample_id,polarity,amp_path,rad_path,label_path"


def save_samples(
    samples: list[TrainingSample], out_dir: str | os.PathLike, prefix: str = "sample"
) -> Path:
    """Write samples as IGRID triplets plus a manifest CSV; returns the
    manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [MANIFEST_HEADER]
    for i, s in enumerate(samples):
        sid = f"{prefix}_{i:05d}"
        amp_path = out / f"{sid}_amp.igrid"
        rad_path = out / f"{sid}_rad.igrid"
        lab_path = out / f"{sid}_label.igrid"
        write_grid(ImageLogGrid(s.geometry, AMPLITUDE, s.amplitude), amp_path)
        write_grid(ImageLogGrid(s.geometry, RADIUS, s.radius), rad_path)
        write_grid(MaskGrid(s.geometry, s.label), lab_path)
        lines.append(f"{sid},{s.polarity},{amp_path.name},{rad_path.name},{lab_path.name}")
    manifest = out / "manifest.csv"
    manifest.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    return manifest


def load_samples(manifest_path: str | os.PathLike) -> list[TrainingSample]:
    """Read samples back from a manifest written by :func:`save_samples`."""
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    lines = manifest_path.read_bytes().decode("utf-8").split("\n")
    if not lines or lines[0].strip() != MANIFEST_HEADER:
        raise ParseError(f"bad manifest header {lines[0]!r}", offset=1)
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise ParseError(f"expected 5 fields, got {len(fields)}", offset=lineno)
        _, polarity, amp_name, rad_name, lab_name = (f.strip() for f in fields)
        amp = read_grid(base / amp_name)
        rad = read_grid(base / rad_name)
        lab = read_grid(base / lab_name)
        if not isinstance(lab, MaskGrid):
            raise ParseError(f"label file {lab_name} is not a mask", offset=lineno)
        samples.append(
            TrainingSample(amp.values, rad.values, lab.values, polarity, amp.geometry)
        )
    return samples
