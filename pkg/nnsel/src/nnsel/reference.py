"""Reference selectors used to benchmark the learned policy.

Greedy forward selection with swap refinement (the labeling oracle) and the
top-L-individual-SINR baseline, implemented here so evaluation does not
depend on the simulator package.
"""

from __future__ import annotations

import numpy as np

from .physics import subset_sinr


def greedy_swap_ports(g: np.ndarray, B: np.ndarray, L: int, rounds: int = 3) -> tuple[int, ...]:
    """Greedy forward selection, then up to `rounds` passes of single-port
    swaps, each applied only on strict improvement. Lowest index wins ties."""
    P = g.shape[0]
    selected: list[int] = []
    in_sel = np.zeros(P, dtype=bool)
    gamma = 0.0
    for _ in range(L):
        best_p, best_val = -1, -np.inf
        for p in range(P):
            if in_sel[p]:
                continue
            val = subset_sinr(g, B, selected + [p])
            if val > best_val:
                best_val, best_p = val, p
        selected.append(best_p)
        in_sel[best_p] = True
        gamma = best_val
    for _ in range(rounds):
        improved = False
        for slot in range(L):
            keep = [selected[i] for i in range(L) if i != slot]
            best_p, best_val = -1, -np.inf
            for p in range(P):
                if in_sel[p]:
                    continue
                val = subset_sinr(g, B, keep + [p])
                if val > best_val:
                    best_val, best_p = val, p
            if best_p >= 0 and best_val > gamma + abs(gamma) * 1e-12:
                in_sel[selected[slot]] = False
                in_sel[best_p] = True
                selected[slot] = best_p
                gamma = best_val
                improved = True
        if not improved:
            break
    return tuple(sorted(selected))


def top_sinr_ports(g: np.ndarray, B: np.ndarray, L: int) -> tuple[int, ...]:
    """The L ports with the largest individual SINR."""
    per_port = (np.abs(g) ** 2) / np.real(np.diag(B))
    order = np.argsort(-per_port, kind="stable")
    return tuple(sorted(int(i) for i in order[:L]))
