"""Two-phase training: supervised imitation of the oracle labels, then
Reinforce fine-tuning that optimizes spectral efficiency directly."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from . import physics
from .config import NNConfig, TrainConfig
from .data import Sample, feature_tensor, label_matrix
from .sampling import PolicyOutput, sample_without_replacement, select_top_l
from .scorer import PortScorer, score_ports

logger = logging.getLogger(__name__)


def bce_loss(scores: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Mean binary cross-entropy between port scores (logits) and the 0/1
    oracle membership labels; natural log, so all-zero scores give ln 2."""
    return nn.functional.binary_cross_entropy_with_logits(scores, labels, reduction="mean")


@dataclass
class BaselineState:
    """Exponential-moving-average reward baseline:
    b <- decay * b + (1 - decay) * reward."""

    decay: float
    value: float = 0.0

    def update(self, reward: float) -> float:
        self.value = self.decay * self.value + (1.0 - self.decay) * reward
        return self.value


@dataclass
class MetricsLog:
    rows: list[tuple[int, str, float, float]] = field(default_factory=list)

    def add(self, epoch: int, phase: str, snr_db: float, val_se: float) -> None:
        self.rows.append((epoch, phase, snr_db, float(val_se)))

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("epoch,phase,snr_db,val_se\n")
            for epoch, phase, snr_db, val_se in self.rows:
                fh.write(f"{epoch},{phase},{snr_db!r},{val_se!r}\n")


def selection_se(H: np.ndarray, snr_db: float, ports) -> float:
    """Spectral efficiency of a port set under optimal combining."""
    snr = 10.0 ** (snr_db / 10.0)
    g = H[:, 0]
    B = physics.interference_matrix(H, snr)
    return physics.spectral_efficiency(physics.subset_sinr(g, B, ports))


def validation_se(model: PortScorer, val: list[Sample], L: int, snr_db: float) -> float:
    """Mean SE of greedy top-L selection on the validation channels,
    re-evaluated at a forced SNR. Scoring is batched over the whole set."""
    feats = np.stack([physics.extract_features(s.H, snr_db) for s in val])
    scores = score_ports(model, feats).numpy()
    ses = [
        selection_se(s.H, snr_db, select_top_l(scores[i], L)) for i, s in enumerate(val)
    ]
    return float(np.mean(ses))


def reinforce_step(
    model: PortScorer,
    optimizer: torch.optim.Optimizer,
    feats_batch: torch.Tensor,
    channels: list[np.ndarray],
    snrs: list[float],
    L: int,
    baseline: BaselineState,
    entropy_weight: float,
    generator: torch.Generator | None = None,
    grad_clip: float | None = None,
) -> dict[str, float]:
    """One policy-gradient update over a batch of fresh channels.

    For each sample: score ports, draw L of them without replacement, take
    the reward R = log2(1 + SINR) with optimal combining, and descend
    -(R - b) log pi - entropy_weight * entropy. The baseline is updated with
    the batch mean reward after the gradient is formed.
    """
    model.train()
    scores = model(feats_batch)
    losses = []
    rewards = []
    for i, (H, snr_db) in enumerate(zip(channels, snrs)):
        out: PolicyOutput = sample_without_replacement(scores[i], L, generator=generator)
        reward = selection_se(H, snr_db, out.selected)
        if not math.isfinite(reward):
            logger.warning("skipping sample with non-finite reward %r", reward)
            continue
        advantage = reward - baseline.value
        losses.append(-advantage * out.log_prob - entropy_weight * out.entropy)
        rewards.append(reward)
    if not losses:
        return {"mean_reward": float("nan"), "baseline": baseline.value, "loss": float("nan")}
    loss = torch.stack(losses).mean()
    optimizer.zero_grad()
    loss.backward()
    if grad_clip is not None:
        torch.nn.utils.clip_grad_norm_(model.parameters(), grad_clip)
    optimizer.step()
    mean_reward = float(np.mean(rewards))
    baseline.update(mean_reward)
    return {"mean_reward": mean_reward, "baseline": baseline.value, "loss": float(loss.item())}


@dataclass
class TrainResult:
    model: PortScorer
    metrics: MetricsLog
    phase1_losses: list[float]


def train(
    train_samples: list[Sample],
    val_samples: list[Sample],
    L: int,
    scenario: physics.Scenario,
    nn_cfg: NNConfig,
    train_cfg: TrainConfig,
    model: PortScorer | None = None,
) -> TrainResult:
    """Run phase 1 (imitation) then phase 2 (Reinforce).

    Phase 2 draws fresh channels from `scenario` with the SNR sampled
    uniformly from the configured range. Validation SE at the configured SNR
    points is logged once per epoch per SNR for both phases.
    """
    torch.manual_seed(train_cfg.seed)
    if model is None:
        model = PortScorer(nn_cfg)
    metrics = MetricsLog()
    phase1_losses: list[float] = []

    feats = torch.as_tensor(feature_tensor(train_samples), dtype=torch.float32)
    labels = torch.as_tensor(label_matrix(train_samples), dtype=torch.float32)
    n = feats.shape[0]
    steps = max(1, math.ceil(n / train_cfg.batch_size))

    opt1 = torch.optim.Adam(model.parameters(), lr=train_cfg.lr_phase1)
    shuffler = torch.Generator().manual_seed(train_cfg.seed + 1)
    for epoch in range(1, train_cfg.n1 + 1):
        model.train()
        perm = torch.randperm(n, generator=shuffler)
        epoch_losses = []
        for b in range(steps):
            idx = perm[b * train_cfg.batch_size : (b + 1) * train_cfg.batch_size]
            loss = bce_loss(model(feats[idx]), labels[idx])
            opt1.zero_grad()
            loss.backward()
            opt1.step()
            epoch_losses.append(float(loss.item()))
        phase1_losses.append(float(np.mean(epoch_losses)))
        for snr_db in train_cfg.val_snrs:
            metrics.add(epoch, "il", snr_db, validation_se(model, val_samples, L, snr_db))

    opt2 = torch.optim.Adam(model.parameters(), lr=train_cfg.lr_phase2)
    baseline = BaselineState(decay=train_cfg.baseline_decay)
    sampler = torch.Generator().manual_seed(train_cfg.seed + 2)
    rng = np.random.default_rng(train_cfg.seed + 3)
    factor = physics.correlation_factor(scenario.P, scenario.W)
    lo, hi = train_cfg.snr_range_phase2
    trial = 0
    for epoch in range(1, train_cfg.n2 + 1):
        epoch_snr = float(rng.uniform(lo, hi))
        for _ in range(steps):
            channels = []
            snrs = []
            rows = []
            for _ in range(train_cfg.batch_size):
                H = physics.sample_channel(factor, scenario.K, scenario.seed, trial)
                trial += 1
                if train_cfg.snr_granularity == "sample":
                    snr_db = float(rng.uniform(lo, hi))
                else:
                    snr_db = epoch_snr
                channels.append(H)
                snrs.append(snr_db)
                rows.append(physics.extract_features(H, snr_db))
            feats_batch = torch.as_tensor(np.stack(rows), dtype=torch.float32)
            reinforce_step(
                model, opt2, feats_batch, channels, snrs, L, baseline,
                train_cfg.entropy_weight, generator=sampler,
                grad_clip=train_cfg.grad_clip,
            )
        for snr_db in train_cfg.val_snrs:
            metrics.add(epoch, "reinforce", snr_db, validation_se(model, val_samples, L, snr_db))

    return TrainResult(model=model, metrics=metrics, phase1_losses=phase1_losses)


def save_checkpoint(model: PortScorer, path: str) -> None:
    torch.save(model.state_dict(), path)


def load_checkpoint(nn_cfg: NNConfig, path: str) -> PortScorer:
    model = PortScorer(nn_cfg)
    model.load_state_dict(torch.load(path, weights_only=True))
    model.eval()
    return model
