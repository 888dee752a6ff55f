"""Evaluation of a trained scorer against the greedy-with-swaps reference."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import physics, reference
from .sampling import select_top_l
from .scorer import PortScorer, score_ports


@dataclass(frozen=True)
class EvalPoint:
    snr_db: float
    nn_se: float
    reference_se: float
    baseline_se: float

    @property
    def ratio(self) -> float:
        return self.nn_se / self.reference_se if self.reference_se > 0 else float("nan")


def evaluate(
    model: PortScorer,
    scenario: physics.Scenario,
    snr_list,
    trials: int,
    rounds: int = 3,
    seed_offset: int = 10_000_000,
) -> list[EvalPoint]:
    """Mean SE per SNR for the learned top-L policy, the greedy-with-swaps
    reference and the top-individual-SINR baseline, on shared fresh
    channels."""
    factor = physics.correlation_factor(scenario.P, scenario.W)
    points = []
    for snr_db in snr_list:
        snr = 10.0 ** (float(snr_db) / 10.0)
        nn_se, ref_se, base_se = [], [], []
        for t in range(trials):
            H = physics.sample_channel(factor, scenario.K, scenario.seed, seed_offset + t)
            g = H[:, 0]
            B = physics.interference_matrix(H, snr)
            feats = physics.extract_features(H, float(snr_db))
            ports = select_top_l(score_ports(model, feats).numpy(), scenario.L)
            nn_se.append(physics.spectral_efficiency(physics.subset_sinr(g, B, ports)))
            ref_ports = reference.greedy_swap_ports(g, B, scenario.L, rounds)
            ref_se.append(physics.spectral_efficiency(physics.subset_sinr(g, B, ref_ports)))
            dc_ports = reference.top_sinr_ports(g, B, scenario.L)
            base_se.append(physics.spectral_efficiency(physics.subset_sinr(g, B, dc_ports)))
        points.append(
            EvalPoint(
                snr_db=float(snr_db),
                nn_se=float(np.mean(nn_se)),
                reference_se=float(np.mean(ref_se)),
                baseline_se=float(np.mean(base_se)),
            )
        )
    return points
