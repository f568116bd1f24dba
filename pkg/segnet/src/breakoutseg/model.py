"""Encoder-decoder segmentation network for dual-channel borehole images.

An 18-layer residual encoder (a light backbone suited to small log
datasets) feeds a multi-scale context block of parallel dilated
convolutions; the decoder fuses the context features with quarter-scale
low-level features through a skip connection and restores full resolution.
The output is a single sigmoid channel: a per-pixel breakout probability.

Every convolution, pooling window, and upsampling step treats the azimuth
(width) axis as periodic: the 0 and 360 degree columns are neighbors, so
features wrap instead of seeing a zero boundary. Depth (height) uses
ordinary zero padding. With all width strides multiplying to 16, the
network is exactly equivariant to circular input shifts of 16 columns.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import nn


@dataclass(frozen=True)
class ModelConfig:
    in_channels: int = 2  # amplitude + radius
    patch_size: int = 256
    stage_channels: tuple[int, int, int, int] = (64, 128, 256, 512)
    aspp_channels: int = 256
    aspp_dilations: tuple[int, ...] = (1, 6, 12, 18)
    decoder_low_channels: int = 48
    decoder_channels: int = 256

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        d = dict(d)
        for key in ("stage_channels", "aspp_dilations"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


def _pad_circular_width(x: torch.Tensor, pad: int) -> torch.Tensor:
    # Modular gather instead of F.pad(mode="circular"): deep feature maps
    # can be narrower than the pad (dilation 18 on a 16-column map), which
    # legitimately wraps more than once.
    if pad == 0:
        return x
    w = x.shape[-1]
    idx = torch.arange(-pad, w + pad, device=x.device) % w
    return x.index_select(-1, idx)


class CircConv2d(nn.Module):
    """Conv2d with periodic padding along width and zero padding along
    height."""

    def __init__(self, in_ch, out_ch, kernel_size, stride=1, dilation=1, bias=False):
        super().__init__()
        self.pad = dilation * (kernel_size - 1) // 2
        self.conv = nn.Conv2d(
            in_ch, out_ch, kernel_size, stride=stride, dilation=dilation, bias=bias
        )

    def forward(self, x):
        x = _pad_circular_width(x, self.pad)
        x = F.pad(x, (0, 0, self.pad, self.pad))
        return self.conv(x)


class BasicBlock(nn.Module):
    """Two 3x3 circular convolutions with a residual connection."""

    def __init__(self, in_ch, out_ch, stride=1, dilation=1):
        super().__init__()
        self.conv1 = CircConv2d(in_ch, out_ch, 3, stride=stride, dilation=dilation)
        self.bn1 = nn.BatchNorm2d(out_ch)
        self.conv2 = CircConv2d(out_ch, out_ch, 3, dilation=dilation)
        self.bn2 = nn.BatchNorm2d(out_ch)
        if stride != 1 or in_ch != out_ch:
            self.shortcut = nn.Sequential(
                nn.Conv2d(in_ch, out_ch, 1, stride=stride, bias=False),
                nn.BatchNorm2d(out_ch),
            )
        else:
            self.shortcut = nn.Identity()

    def forward(self, x):
        out = F.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return F.relu(out + self.shortcut(x))


class Encoder(nn.Module):
    """Residual feature hierarchy at scales L/2, L/4, L/8, L/16.

    The deepest stage keeps the L/16 scale (stride one, dilation two) so
    the context block sees a dense feature map.
    """

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        c1, c2, c3, c4 = cfg.stage_channels
        self.stem = nn.Sequential(
            CircConv2d(cfg.in_channels, c1, 7, stride=2),  # L/2
            nn.BatchNorm2d(c1),
            nn.ReLU(inplace=True),
        )
        self.layer1 = nn.Sequential(  # L/4 after the pooled stem
            BasicBlock(c1, c1), BasicBlock(c1, c1)
        )
        self.layer2 = nn.Sequential(  # L/8
            BasicBlock(c1, c2, stride=2), BasicBlock(c2, c2)
        )
        self.layer3 = nn.Sequential(  # L/16
            BasicBlock(c2, c3, stride=2), BasicBlock(c3, c3)
        )
        self.layer4 = nn.Sequential(  # stays at L/16, dilated
            BasicBlock(c3, c4, stride=1, dilation=2),
            BasicBlock(c4, c4, dilation=2),
        )

    @staticmethod
    def _pool(x):
        x = _pad_circular_width(x, 1)
        x = F.pad(x, (0, 0, 1, 1), value=float("-inf"))
        return F.max_pool2d(x, kernel_size=3, stride=2)

    def forward(self, x):
        x = self.stem(x)
        x = self._pool(x)
        low = self.layer1(x)  # L/4, skip-connected into the decoder
        x = self.layer2(low)
        x = self.layer3(x)
        x = self.layer4(x)
        return low, x


class MultiScaleContext(nn.Module):
    """Parallel dilated convolutions over the deepest features, fused by a
    1x1 projection."""

    def __init__(self, in_ch, out_ch, dilations):
        super().__init__()
        branches = []
        for d in dilations:
            if d == 1:
                branches.append(
                    nn.Sequential(
                        nn.Conv2d(in_ch, out_ch, 1, bias=False),
                        nn.BatchNorm2d(out_ch),
                        nn.ReLU(inplace=True),
                    )
                )
            else:
                branches.append(
                    nn.Sequential(
                        CircConv2d(in_ch, out_ch, 3, dilation=d),
                        nn.BatchNorm2d(out_ch),
                        nn.ReLU(inplace=True),
                    )
                )
        self.branches = nn.ModuleList(branches)
        self.project = nn.Sequential(
            nn.Conv2d(out_ch * len(dilations), out_ch, 1, bias=False),
            nn.BatchNorm2d(out_ch),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.project(torch.cat([b(x) for b in self.branches], dim=1))


def _upsample_circular(x: torch.Tensor, scale: int) -> torch.Tensor:
    """Bilinear upsampling that wraps across the width boundary."""
    x = _pad_circular_width(x, 1)
    x = F.interpolate(x, scale_factor=scale, mode="bilinear", align_corners=False)
    return x[..., scale:-scale]


class BreakoutSegNet(nn.Module):
    """Full segmentation model: probability map with the input's spatial
    shape."""

    def __init__(self, cfg: ModelConfig | None = None):
        super().__init__()
        self.cfg = cfg or ModelConfig()
        c1 = self.cfg.stage_channels[0]
        c4 = self.cfg.stage_channels[3]
        ca = self.cfg.aspp_channels
        cl = self.cfg.decoder_low_channels
        cd = self.cfg.decoder_channels
        self.encoder = Encoder(self.cfg)
        self.context = MultiScaleContext(c4, ca, self.cfg.aspp_dilations)
        self.reduce_low = nn.Sequential(
            nn.Conv2d(c1, cl, 1, bias=False),
            nn.BatchNorm2d(cl),
            nn.ReLU(inplace=True),
        )
        self.fuse = nn.Sequential(
            CircConv2d(ca + cl, cd, 3),
            nn.BatchNorm2d(cd),
            nn.ReLU(inplace=True),
            CircConv2d(cd, cd, 3),
            nn.BatchNorm2d(cd),
            nn.ReLU(inplace=True),
        )
        self.head = nn.Conv2d(cd, 1, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """(N, 2, H, W) -> (N, 1, H, W) probabilities in [0, 1]."""
        low, deep = self.encoder(x)
        ctx = self.context(deep)
        ctx = _upsample_circular(ctx, 4)  # L/16 -> L/4
        fused = self.fuse(torch.cat([ctx, self.reduce_low(low)], dim=1))
        logits = self.head(_upsample_circular(fused, 4))  # L/4 -> L
        return torch.sigmoid(logits)
