"""Transformer port scorer.

Per-port feature rows are projected through LayerNorm, a linear layer and
GELU into the model dimension, run through a stack of self-attention encoder
layers, and mapped token-wise to scalar scores. There is no positional
encoding: the architecture is permutation-equivariant over the port axis,
matching the set semantics of port selection, and the port count is not
baked into any weight shape.
"""

from __future__ import annotations

import torch
from torch import nn

from .config import NNConfig


class PortScorer(nn.Module):
    def __init__(self, cfg: NNConfig):
        super().__init__()
        self.cfg = cfg
        self.input_norm = nn.LayerNorm(cfg.input_dim)
        self.input_proj = nn.Linear(cfg.input_dim, cfg.d)
        self.act = nn.GELU()
        layer = nn.TransformerEncoderLayer(
            d_model=cfg.d,
            nhead=cfg.h,
            dim_feedforward=cfg.d_ff,
            dropout=cfg.dropout,
            activation="gelu",
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=cfg.n_layers)
        self.head = nn.Linear(cfg.d, 1)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        """(P, F) or (batch, P, F) features -> (P,) or (batch, P) scores."""
        squeeze = features.dim() == 2
        if squeeze:
            features = features.unsqueeze(0)
        if features.shape[-1] != self.cfg.input_dim:
            raise ValueError(
                f"expected {self.cfg.input_dim} features per port, got {features.shape[-1]}"
            )
        x = self.act(self.input_proj(self.input_norm(features)))
        x = self.encoder(x)
        scores = self.head(x).squeeze(-1)
        return scores.squeeze(0) if squeeze else scores


def score_ports(model: PortScorer, features) -> torch.Tensor:
    """Deterministic evaluation-mode scores for one feature matrix."""
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            feats = torch.as_tensor(features, dtype=next(model.parameters()).dtype)
            return model(feats)
    finally:
        if was_training:
            model.train()
