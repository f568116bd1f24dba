"""Minimal command-line front end: train on a manifest, or run inference
on a dual-channel log and write the probability grid.

    python -m breakoutseg train --manifest m.csv --out-dir run/ --seed 0
    python -m breakoutseg infer --weights run/weights.pt \
        --amplitude amp.igrid --radius rad.igrid --out prob.igrid
"""

from __future__ import annotations

import argparse
import sys

from breakoutkit.gridio import read_grid, write_grid

from .infer import infer
from .model import ModelConfig
from .train import TrainConfig, load_model, train


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="breakoutseg")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", default="train_out")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)

    p = sub.add_parser("infer")
    p.add_argument("--weights", required=True)
    p.add_argument("--amplitude", required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--out", default="prob.igrid")

    args = parser.parse_args(argv)
    if args.command == "train":
        weights, losses = train(
            args.manifest,
            ModelConfig(),
            TrainConfig(
                epochs=args.epochs,
                batch_size=args.batch_size,
                learning_rate=args.learning_rate,
            ),
            seed=args.seed,
            out_dir=args.out_dir,
        )
        print(f"wrote {weights}; final loss {losses[-1]:.4f}")
        return 0
    model = load_model(args.weights)
    amp = read_grid(args.amplitude)
    rad = read_grid(args.radius)
    prob = infer(amp, rad, model)
    write_grid(prob, args.out)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
