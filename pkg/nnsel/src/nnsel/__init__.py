"""Transformer-based port scorer trained by imitation plus Reinforce."""

from .config import NNConfig, TrainConfig, load_sidecar, save_sidecar
from .data import Sample, feature_tensor, label_matrix, load_jsonl
from .evaluate import EvalPoint, evaluate
from .physics import Scenario, extract_features, gev_combiner, spectral_efficiency, subset_sinr
from .sampling import PolicyOutput, sample_without_replacement, select_top_l
from .scorer import PortScorer, score_ports
from .train import (
    BaselineState,
    MetricsLog,
    TrainResult,
    bce_loss,
    load_checkpoint,
    reinforce_step,
    save_checkpoint,
    selection_se,
    train,
    validation_se,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineState",
    "EvalPoint",
    "MetricsLog",
    "NNConfig",
    "PolicyOutput",
    "PortScorer",
    "Sample",
    "Scenario",
    "TrainConfig",
    "TrainResult",
    "bce_loss",
    "evaluate",
    "extract_features",
    "feature_tensor",
    "gev_combiner",
    "label_matrix",
    "load_checkpoint",
    "load_jsonl",
    "load_sidecar",
    "reinforce_step",
    "sample_without_replacement",
    "save_checkpoint",
    "save_sidecar",
    "score_ports",
    "select_top_l",
    "selection_se",
    "spectral_efficiency",
    "subset_sinr",
    "train",
    "validation_se",
]
