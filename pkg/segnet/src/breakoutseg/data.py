"""Training data access: the manifest/IGRID interchange written by the
image-log toolkit, plus input normalization.

Each sample is an (amplitude, radius, label) patch triplet. Amplitude and
radius are standardized per patch (zero mean, unit standard deviation over
the patch) so the network sees gain-invariant signals; the same
standardization is applied window-by-window at inference time.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np
import torch
from breakoutkit.augment import POSITIVE, load_samples

STD_FLOOR = 1e-6


def standardize(channel: np.ndarray) -> np.ndarray:
    """Zero-mean, unit-std copy of one channel (NaN cells become zero)."""
    x = np.asarray(channel, dtype=np.float32)
    finite = np.isfinite(x)
    if not finite.any():
        return np.zeros_like(x)
    mean = float(x[finite].mean())
    std = max(float(x[finite].std()), STD_FLOOR)
    out = (x - mean) / std
    out[~finite] = 0.0
    return out


def sample_to_tensors(sample) -> tuple[torch.Tensor, torch.Tensor]:
    """TrainingSample -> ((2, H, W) input, (1, H, W) label)."""
    x = np.stack([standardize(sample.amplitude), standardize(sample.radius)])
    y = sample.label[None].astype(np.float32)
    return torch.from_numpy(x), torch.from_numpy(y)


class ManifestDataset(torch.utils.data.Dataset):
    """Samples from a manifest CSV, as standardized tensors."""

    def __init__(self, manifest_path: str | Path):
        self.samples = load_samples(manifest_path)
        if not self.samples:
            raise ValueError(f"manifest {manifest_path} lists no samples")
        polarities = {s.polarity for s in self.samples}
        if polarities == {POSITIVE}:
            warnings.warn(
                "manifest contains no negative samples; training without "
                "hard negatives tends to overpredict breakout-like features",
                stacklevel=2,
            )

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, index: int):
        return sample_to_tensors(self.samples[index])
