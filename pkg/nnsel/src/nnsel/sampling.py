"""Port selection from scores: deterministic top-L and sequential sampling
without replacement for the policy-gradient phase."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch


@dataclass(frozen=True)
class PolicyOutput:
    """A sampled selection: the scores it came from, the L distinct ports,
    the log-probability of the drawn sequence and the summed per-draw
    categorical entropy (exploration bonus target)."""

    scores: torch.Tensor
    selected: tuple[int, ...]
    log_prob: torch.Tensor
    entropy: torch.Tensor


def select_top_l(scores, L: int) -> tuple[int, ...]:
    """Indices of the L largest scores; ties go to the lowest index."""
    s = np.asarray(scores, dtype=float).reshape(-1)
    if not (1 <= L <= s.size):
        raise ValueError(f"need 1 <= L <= P, got L={L}, P={s.size}")
    order = np.argsort(-s, kind="stable")
    return tuple(sorted(int(i) for i in order[:L]))


def sample_without_replacement(
    scores: torch.Tensor, L: int, generator: torch.Generator | None = None
) -> PolicyOutput:
    """Draw L distinct ports from the softmax policy over scores.

    After each draw the chosen port is masked out and the categorical
    distribution renormalized; log_prob accumulates the L sequential
    log-probabilities, so exp(log_prob) is the probability of the drawn
    ordered sequence.
    """
    P = scores.shape[-1]
    if not (1 <= L <= P):
        raise ValueError(f"need 1 <= L <= P, got L={L}, P={P}")
    masked = scores.clone()
    selected: list[int] = []
    for _ in range(L):
        probs = torch.softmax(masked.detach(), dim=-1)
        idx = int(torch.multinomial(probs, 1, generator=generator).item())
        selected.append(idx)
        masked = masked.clone()
        masked[idx] = float("-inf")
    log_prob, entropy = sequence_log_prob(scores, selected)
    return PolicyOutput(
        scores=scores,
        selected=tuple(selected),
        log_prob=log_prob,
        entropy=entropy,
    )


def sequence_log_prob(scores: torch.Tensor, sequence) -> tuple[torch.Tensor, torch.Tensor]:
    """Log-probability of drawing `sequence` in order without replacement,
    plus the summed per-draw categorical entropy. Differentiable in scores."""
    seq = [int(i) for i in sequence]
    if len(set(seq)) != len(seq):
        raise ValueError(f"sequence has repeated ports: {seq}")
    masked = scores.clone()
    log_prob = scores.new_zeros(())
    entropy = scores.new_zeros(())
    for idx in seq:
        logp = torch.log_softmax(masked, dim=-1)
        probs = torch.exp(logp)
        log_prob = log_prob + logp[idx]
        finite = torch.isfinite(logp)
        entropy = entropy - torch.sum(probs[finite] * logp[finite])
        masked = masked.clone()
        masked[idx] = float("-inf")
    return log_prob, entropy
