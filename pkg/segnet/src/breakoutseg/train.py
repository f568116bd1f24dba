"""Deterministic training loop for the breakout segmentation network.

Given a sample manifest, trains with the class-balanced cross-entropy and
writes three artifacts: the weights, a JSON sidecar carrying the model
configuration, training settings, seed, and a config fingerprint, and a
per-epoch loss curve CSV. The same manifest, configuration, and seed on
the same device reproduce the loss curve exactly.
"""

from __future__ import annotations

import dataclasses
import json
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import ManifestDataset
from .loss import class_balanced_bce
from .model import BreakoutSegNet, ModelConfig


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    batch_size: int = 4
    learning_rate: float = 1e-3
    weight_decay: float = 0.0

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed % 2**32)
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True)


def train(
    manifest_path: str | Path,
    model_config: ModelConfig = ModelConfig(),
    train_config: TrainConfig = TrainConfig(),
    seed: int = 0,
    out_dir: str | Path = "train_out",
) -> tuple[Path, list[float]]:
    """Train on a manifest; returns (weights path, per-epoch losses)."""
    _seed_everything(seed)
    dataset = ManifestDataset(manifest_path)
    loader = torch.utils.data.DataLoader(
        dataset,
        batch_size=train_config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(seed),
        num_workers=0,
    )
    model = BreakoutSegNet(model_config)
    model.train()
    optimizer = torch.optim.Adam(
        model.parameters(),
        lr=train_config.learning_rate,
        weight_decay=train_config.weight_decay,
    )

    losses: list[float] = []
    for _epoch in range(train_config.epochs):
        epoch_loss = 0.0
        for x, y in loader:
            optimizer.zero_grad()
            p = model(x)
            loss = class_balanced_bce(y, p)
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach())
        losses.append(epoch_loss)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    weights_path = out / "weights.pt"
    torch.save(model.state_dict(), weights_path)
    sidecar = {
        "model_config": model_config.to_dict(),
        "train_config": train_config.to_dict(),
        "seed": seed,
        "config_fingerprint": model_config.fingerprint(),
        "n_samples": len(dataset),
        "final_loss": losses[-1] if losses else None,
    }
    (out / "weights.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True))
    curve = "epoch,loss\n" + "".join(
        f"{i},{loss!r}\n" for i, loss in enumerate(losses)
    )
    (out / "loss_curve.csv").write_text(curve)
    return weights_path, losses


def load_model(weights_path: str | Path) -> BreakoutSegNet:
    """Rebuild a model from its weights file and JSON sidecar."""
    weights_path = Path(weights_path)
    sidecar = json.loads(weights_path.with_suffix(".json").read_text())
    model = BreakoutSegNet(ModelConfig.from_dict(sidecar["model_config"]))
    model.load_state_dict(torch.load(weights_path, weights_only=True))
    model.eval()
    return model
