"""Whole-borehole inference with depth windowing.

Logs are processed in 256-row depth windows with a 128-row stride; where
windows overlap, the probabilities are averaged, so every stitched value
is a convex combination and stays inside [0, 1]. Short logs are padded by
reflection to a full window and cropped back. The azimuth axis must be
256 columns (resample externally otherwise).
"""

from __future__ import annotations

import numpy as np
import torch
from breakoutkit.core import GeometryError, ImageLogGrid, ProbGrid

from .data import standardize
from .model import BreakoutSegNet

WINDOW_ROWS = 256
STRIDE_ROWS = 128


def _window_starts(n_depth: int) -> list[int]:
    if n_depth <= WINDOW_ROWS:
        return [0]
    starts = list(range(0, n_depth - WINDOW_ROWS + 1, STRIDE_ROWS))
    if starts[-1] != n_depth - WINDOW_ROWS:
        starts.append(n_depth - WINDOW_ROWS)  # align the last window to the end
    return starts


@torch.no_grad()
def infer(amp: ImageLogGrid, rad: ImageLogGrid, model: BreakoutSegNet) -> ProbGrid:
    """Pixel-wise breakout probabilities for a dual-channel log."""
    if amp.geometry != rad.geometry:
        raise GeometryError("amplitude and radius grids must share geometry")
    g = amp.geometry
    if g.n_azimuth != model.cfg.patch_size:
        raise GeometryError(
            f"n_azimuth must be {model.cfg.patch_size} for this model, "
            f"got {g.n_azimuth}"
        )
    model.eval()

    amp_v = np.asarray(amp.values, dtype=np.float32)
    rad_v = np.asarray(rad.values, dtype=np.float32)
    n_depth = g.n_depth
    if n_depth < WINDOW_ROWS:
        pad = WINDOW_ROWS - n_depth
        mode = "reflect" if n_depth > 1 else "edge"
        amp_v = np.pad(amp_v, ((0, pad), (0, 0)), mode=mode)
        rad_v = np.pad(rad_v, ((0, pad), (0, 0)), mode=mode)

    total_rows = amp_v.shape[0]
    acc = np.zeros((total_rows, g.n_azimuth), dtype=np.float64)
    hits = np.zeros(total_rows, dtype=np.int64)
    for start in _window_starts(total_rows):
        sl = slice(start, start + WINDOW_ROWS)
        x = np.stack([standardize(amp_v[sl]), standardize(rad_v[sl])])
        p = model(torch.from_numpy(x)[None])[0, 0].numpy()
        acc[sl] += p
        hits[sl] += 1

    probs = (acc / hits[:, None])[:n_depth]
    return ProbGrid(g, np.clip(probs, 0.0, 1.0).astype(np.float32))
