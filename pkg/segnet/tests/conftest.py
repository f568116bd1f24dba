import numpy as np
import pytest
import torch
from breakoutkit.augment import TrainingSample
from breakoutkit.core import GridGeometry

SLIM = dict(
    stage_channels=(16, 32, 64, 128),
    aspp_channels=64,
    decoder_low_channels=16,
    decoder_channels=64,
)


def make_positive_samples(seed, count=5, n=64):
    """Synthetic positive patches: a low-amplitude, enlarged-radius block."""
    rng = np.random.default_rng(seed)
    g = GridGeometry(n, n, 0.0, 0.1)
    samples = []
    for _ in range(count):
        amp = rng.normal(100.0, 5.0, (n, n)).astype(np.float32)
        rad = rng.uniform(46.0, 50.0, (n, n)).astype(np.float32)
        label = np.zeros((n, n), dtype=np.uint8)
        r0 = int(rng.integers(0, n - 20))
        c0 = int(rng.integers(0, n - 14))
        label[r0 : r0 + 16, c0 : c0 + 12] = 1
        amp[label == 1] -= 15.0
        rad[label == 1] += 5.0
        samples.append(TrainingSample(amp, rad, label, "positive", g))
    return samples


@pytest.fixture(autouse=True)
def _torch_determinism():
    torch.use_deterministic_algorithms(True)
    yield
