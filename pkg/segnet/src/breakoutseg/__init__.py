"""Breakout segmentation network for acoustic image logs.

Trains on manifest-listed patch triplets produced by the image-log
toolkit's augmentation stage and emits probability grids in the same IGRID
interchange format, so its output plugs directly into the toolkit's
post-processing and validation pipeline.
"""

from .data import ManifestDataset, sample_to_tensors, standardize
from .infer import infer
from .loss import class_balanced_bce
from .model import BreakoutSegNet, ModelConfig
from .train import TrainConfig, load_model, train

__version__ = "0.1.0"
