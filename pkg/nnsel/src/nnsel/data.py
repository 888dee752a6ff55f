"""Loading of the simulator-exported JSONL dataset and golden files."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Sample:
    """One dataset line. Oracle fields are None for golden (feature-only)
    files."""

    H: np.ndarray
    snr_db: float
    features: np.ndarray
    oracle_ports: tuple[int, ...] | None
    oracle_sinr: float | None
    seed: int | None
    trial: int | None


def _parse_line(obj: dict) -> Sample:
    H = np.asarray(obj["H_re"], dtype=float) + 1j * np.asarray(obj["H_im"], dtype=float)
    ports = obj.get("oracle_ports")
    return Sample(
        H=H,
        snr_db=float(obj["snr_db"]),
        features=np.asarray(obj["features"], dtype=float),
        oracle_ports=tuple(int(p) for p in ports) if ports is not None else None,
        oracle_sinr=float(obj["oracle_sinr"]) if "oracle_sinr" in obj else None,
        seed=int(obj["seed"]) if "seed" in obj else None,
        trial=int(obj["trial"]) if "trial" in obj else None,
    )


def load_jsonl(path: str) -> list[Sample]:
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                samples.append(_parse_line(json.loads(line)))
            except (KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed dataset line: {exc}") from exc
    return samples


def label_matrix(samples: list[Sample]) -> np.ndarray:
    """Multi-hot oracle labels, one row per sample."""
    P = samples[0].H.shape[0]
    y = np.zeros((len(samples), P), dtype=np.float64)
    for i, s in enumerate(samples):
        if s.oracle_ports is None:
            raise ValueError("sample has no oracle labels (golden file?)")
        y[i, list(s.oracle_ports)] = 1.0
    return y


def feature_tensor(samples: list[Sample]) -> np.ndarray:
    return np.stack([s.features for s in samples])
