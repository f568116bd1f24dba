"""Acceptance suite for the segmentation component.

Run with ``pytest tests/test_acceptance.py -v -s`` for one line per
criterion.
"""

import warnings

import numpy as np
import torch
from breakoutkit.augment import save_samples
from breakoutkit.core import AMPLITUDE, RADIUS, ImageLogGrid
from breakoutkit.evaluation import balanced_bce

from breakoutseg import (
    BreakoutSegNet,
    ModelConfig,
    TrainConfig,
    class_balanced_bce,
    infer,
    train,
)

from conftest import SLIM, make_positive_samples


def report(line):
    print(f"\n[PASS] {line}")


def test_loss_parity_with_reference_on_100_batches():
    """Batch loss matches the pipeline's reference class-balanced
    cross-entropy within 1e-5 relative on 100 random batches."""
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(100):
        shape = (int(rng.integers(1, 6)), 1,
                 int(rng.integers(16, 64)), int(rng.integers(16, 64)))
        y = rng.integers(0, 2, shape).astype(np.float32)
        p = rng.uniform(0, 1, shape).astype(np.float32)
        _, ref = balanced_bce(y.ravel(), p.ravel())
        ours = float(class_balanced_bce(torch.from_numpy(y), torch.from_numpy(p)))
        rel = abs(ours - ref) / max(abs(ref), 1e-12)
        worst = max(worst, rel)
    assert worst <= 1e-5
    report(f"loss parity on 100 random batches, worst relative error {worst:.2e}")


def test_circular_padding_equivariance_shift_16():
    """Shifting the input by 16 columns shifts the probability map by 16
    columns with max deviation < 1e-4, through full-borehole inference."""
    torch.manual_seed(99)
    model = BreakoutSegNet(ModelConfig(patch_size=64, **SLIM))
    rng = np.random.default_rng(7)
    from breakoutkit.core import GridGeometry

    g = GridGeometry(300, 64, 0.0, 0.1)
    amp_v = rng.normal(100, 5, g.shape()).astype(np.float32)
    rad_v = rng.uniform(46, 50, g.shape()).astype(np.float32)
    base = infer(
        ImageLogGrid(g, AMPLITUDE, amp_v), ImageLogGrid(g, RADIUS, rad_v), model
    )
    shifted = infer(
        ImageLogGrid(g, AMPLITUDE, np.roll(amp_v, 16, axis=1)),
        ImageLogGrid(g, RADIUS, np.roll(rad_v, 16, axis=1)),
        model,
    )
    dev = float(np.abs(np.roll(base.values, 16, axis=1) - shifted.values).max())
    assert dev < 1e-4
    report(f"shift-16 equivariance through windowed inference, max dev {dev:.2e}")


def test_toy_overfit_five_samples():
    """Training on five positive samples drives the loss below 5% of its
    initial value within 200 epochs."""
    samples = make_positive_samples(0)
    import tempfile

    with tempfile.TemporaryDirectory() as td:
        manifest = save_samples(samples, td + "/set")
        cfg = ModelConfig(patch_size=64, **SLIM)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            _, losses = train(
                manifest, cfg,
                TrainConfig(epochs=200, batch_size=5, learning_rate=2e-3),
                seed=1, out_dir=td + "/run",
            )
    ratio = losses[-1] / losses[0]
    assert ratio < 0.05, f"final/initial loss ratio {ratio:.3f}"
    report(f"toy overfit: loss ratio {ratio:.4f} after 200 epochs")
