"""Model and training configuration."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class NNConfig:
    """Scorer architecture. Defaults: 192-dim model, 6 heads, 5 encoder
    layers, 384-dim feed-forward, dropout 0.05."""

    input_dim: int
    d: int = 192
    h: int = 6
    n_layers: int = 5
    d_ff: int = 384
    dropout: float = 0.05

    def __post_init__(self) -> None:
        if self.d % self.h != 0:
            raise ValueError(f"model dim {self.d} must be divisible by heads {self.h}")
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be positive, got {self.input_dim}")


@dataclass(frozen=True)
class TrainConfig:
    """Two-phase training schedule.

    Phase 1 is supervised imitation for n1 epochs; phase 2 runs Reinforce for
    n2 epochs with the SNR drawn uniformly from snr_range_phase2 and an
    exponential-moving-average reward baseline.
    """

    n1: int = 100
    n2: int = 100
    batch_size: int = 64
    lr_phase1: float = 1e-3
    lr_phase2: float = 1e-4
    baseline_decay: float = 0.95
    entropy_weight: float = 1e-2
    snr_range_phase2: tuple[float, float] = (5.0, 27.0)
    val_snrs: tuple[float, ...] = (10.0, 15.0, 20.0)
    # "sample" draws a fresh SNR per sample; "epoch" draws one per epoch so
    # the moving-average baseline can settle to that SNR's reward level
    snr_granularity: str = "sample"
    grad_clip: float | None = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("epoch counts must be nonnegative")
        if not (0.0 <= self.baseline_decay < 1.0):
            raise ValueError("baseline_decay must lie in [0, 1)")
        lo, hi = self.snr_range_phase2
        if hi < lo:
            raise ValueError("snr_range_phase2 must be an increasing pair")
        if self.snr_granularity not in ("sample", "epoch"):
            raise ValueError(f"snr_granularity must be 'sample' or 'epoch', got {self.snr_granularity!r}")


def save_sidecar(path: str, nn_cfg: NNConfig, train_cfg: TrainConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"nn": asdict(nn_cfg), "train": asdict(train_cfg)}, fh, indent=2)


def load_sidecar(path: str) -> tuple[NNConfig, TrainConfig]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    train_raw = dict(data["train"])
    train_raw["snr_range_phase2"] = tuple(train_raw["snr_range_phase2"])
    train_raw["val_snrs"] = tuple(train_raw["val_snrs"])
    return NNConfig(**data["nn"]), TrainConfig(**train_raw)
