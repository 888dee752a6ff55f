import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from famaport import (
    SystemConfig,
    build_correlation,
    build_signal_model,
    sample_channel,
)

_CORR_CACHE: dict[tuple[int, float], object] = {}


def cached_correlation(P: int, W: float):
    key = (P, float(W))
    if key not in _CORR_CACHE:
        _CORR_CACHE[key] = build_correlation(P, W)
    return _CORR_CACHE[key]


def make_model(P=12, K=4, snr_db=10.0, seed=0, trial=0, W=2.0, L=3):
    """Random instance through the full pipeline; correlation cached per (P, W)."""
    cfg = SystemConfig(P=P, L=L, K=K, W=W, snr_db=snr_db, seed=seed)
    corr = cached_correlation(P, W)
    ch = sample_channel(corr, cfg, trial)
    return cfg, ch, build_signal_model(ch, cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
