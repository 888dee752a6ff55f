"""Port-selection algorithms.

All selectors are pure functions of (model, L, R) with deterministic
tie-breaking: the lowest port index wins every argmax/argmin tie, and sets
compare lexicographically. Selector identifiers (CLI/CSV): sfama, dc, cuma,
gfwd, gfwds, geport, exhaustive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import BudgetExceededError, InvalidArgumentError
from .gev import PortSet, _subset_sinr_idx, combiner_sinr, rank1_gev, spectral_efficiency
from .model import SignalModel

EXHAUSTIVE_BUDGET = 1_000_000

# Relative slack a swap must clear before it is accepted; keeps the strict
# improvement rule from looping on float noise.
_SWAP_REL_EPS = 1e-12


@dataclass(frozen=True)
class PortSelection:
    """Outcome of one selector run: the chosen ports (canonical order), the
    unit-norm combiner over them, the achieved SINR/SE and an optional trace
    (per-step SINRs for the greedy phase, swap log for the refinement)."""

    ports: PortSet
    w: np.ndarray
    sinr: float
    se: float
    algorithm: str
    trace: dict[str, Any] | None = None


def _check_L(L: int, P: int) -> int:
    L = int(L)
    if not (1 <= L <= P):
        raise InvalidArgumentError(f"need 1 <= L <= P, got L={L}, P={P}")
    return L


def _per_port_sinr(model: SignalModel) -> np.ndarray:
    return np.real(np.diag(model.A)) / np.real(np.diag(model.B))


def _top_by(values: np.ndarray, L: int) -> np.ndarray:
    """Indices of the L largest values, lowest index first among ties."""
    order = np.argsort(-values, kind="stable")
    return np.sort(order[:L])


def _gev_selection(
    model: SignalModel, idx: np.ndarray, algorithm: str, trace: dict[str, Any] | None = None
) -> PortSelection:
    """Finalize a subset with the optimal (GEV) combiner."""
    sol = rank1_gev(model.g[idx], model.B[np.ix_(idx, idx)])
    return PortSelection(
        ports=PortSet(tuple(int(i) for i in idx)),
        w=sol.w,
        sinr=sol.lambda_max,
        se=spectral_efficiency(sol.lambda_max),
        algorithm=algorithm,
        trace=trace,
    )


def select_slow_fama(model: SignalModel) -> PortSelection:
    """Single best port by per-port SINR, scalar combiner."""
    gamma = _per_port_sinr(model)
    p = int(np.argmax(gamma))
    sinr = float(gamma[p])
    return PortSelection(
        ports=PortSet((p,)),
        w=np.ones(1, dtype=np.complex128),
        sinr=sinr,
        se=spectral_efficiency(sinr),
        algorithm="sfama",
    )


def select_dc(model: SignalModel, L: int) -> PortSelection:
    """The L individually best ports by per-port SINR, then GEV combining."""
    L = _check_L(L, model.n_ports)
    idx = _top_by(_per_port_sinr(model), L)
    return _gev_selection(model, idx, "dc")


def select_cuma(model: SignalModel, L: int) -> PortSelection:
    """Phase-aligned constructive combining with a fixed equal-gain combiner.

    Rotates the desired vector by the phase of its strongest entry, prefers
    ports whose rotated real part is positive (padding with the largest
    remaining ones when fewer than L are), and combines with w = 1/sqrt(L).
    """
    L = _check_L(L, model.n_ports)
    g = model.g
    anchor = int(np.argmax(np.abs(g)))
    a = g[anchor]
    phase = a / abs(a) if abs(a) > 0 else 1.0
    aligned = np.real(g * np.conj(phase))
    order = np.argsort(-aligned, kind="stable")
    positive = [int(p) for p in order if aligned[p] > 0]
    chosen = positive[:L]
    if len(chosen) < L:
        rest = [int(p) for p in order if int(p) not in set(chosen)]
        chosen.extend(rest[: L - len(chosen)])
    idx = np.sort(np.asarray(chosen, dtype=np.intp))
    w = np.full(L, 1.0 / math.sqrt(L), dtype=np.complex128)
    sinr = combiner_sinr(model, idx, w)
    return PortSelection(
        ports=PortSet(tuple(int(i) for i in idx)),
        w=w,
        sinr=sinr,
        se=spectral_efficiency(sinr),
        algorithm="cuma",
    )


def _greedy_forward(model: SignalModel, L: int) -> tuple[list[int], list[float]]:
    """Greedy selection order and the per-step achieved SINRs."""
    P = model.n_ports
    selected: list[int] = []
    in_sel = np.zeros(P, dtype=bool)
    steps: list[float] = []
    for _ in range(L):
        best_p = -1
        best_val = -math.inf
        for p in range(P):
            if in_sel[p]:
                continue
            cand = np.sort(np.asarray(selected + [p], dtype=np.intp))
            val = _subset_sinr_idx(model, cand)
            if val > best_val:
                best_val = val
                best_p = p
        selected.append(best_p)
        in_sel[best_p] = True
        steps.append(best_val)
    return selected, steps


def select_gfwd(model: SignalModel, L: int) -> PortSelection:
    """Greedy forward selection: at each step add the port that maximizes the
    SINR of the enlarged subset. The per-step SINR trace is non-decreasing."""
    L = _check_L(L, model.n_ports)
    selected, steps = _greedy_forward(model, L)
    idx = np.sort(np.asarray(selected, dtype=np.intp))
    return _gev_selection(
        model, idx, "gfwd", trace={"step_sinr": steps, "selection_order": list(selected)}
    )


def select_gfwd_swap(model: SignalModel, L: int, R: int = 3) -> PortSelection:
    """Greedy forward selection followed by up to R rounds of swap refinement.

    Each round scans the selected slots in order; for each slot it finds the
    best replacement among the unselected ports and applies it immediately if
    it strictly improves the incumbent SINR. Stops early on a round with no
    improvement.
    """
    L = _check_L(L, model.n_ports)
    R = int(R)
    if R < 0:
        raise InvalidArgumentError(f"R must be >= 0, got {R}")
    P = model.n_ports
    selected, steps = _greedy_forward(model, L)
    in_sel = np.zeros(P, dtype=bool)
    in_sel[selected] = True
    gamma = steps[-1]
    swaps: list[dict[str, Any]] = []
    for rnd in range(1, R + 1):
        improved = False
        for slot in range(L):
            keep = [selected[i] for i in range(L) if i != slot]
            best_p = -1
            best_val = -math.inf
            for p in range(P):
                if in_sel[p]:
                    continue
                cand = np.sort(np.asarray(keep + [p], dtype=np.intp))
                val = _subset_sinr_idx(model, cand)
                if val > best_val:
                    best_val = val
                    best_p = p
            if best_p >= 0 and best_val > gamma + abs(gamma) * _SWAP_REL_EPS:
                out_port = selected[slot]
                in_sel[out_port] = False
                in_sel[best_p] = True
                selected[slot] = best_p
                gamma = best_val
                improved = True
                swaps.append(
                    {"round": rnd, "out": int(out_port), "in": int(best_p), "sinr": best_val}
                )
        if not improved:
            break
    idx = np.sort(np.asarray(selected, dtype=np.intp))
    return _gev_selection(
        model,
        idx,
        "gfwds",
        trace={"step_sinr": steps, "selection_order": list(selected), "swaps": swaps},
    )


def select_geport(model: SignalModel, L: int) -> PortSelection:
    """Backward elimination: start from all ports and repeatedly drop the one
    with the smallest combiner magnitude, one eigensolve per step."""
    L = _check_L(L, model.n_ports)
    S = list(range(model.n_ports))
    while len(S) > L:
        idx = np.asarray(S, dtype=np.intp)
        sol = rank1_gev(model.g[idx], model.B[np.ix_(idx, idx)])
        S.pop(int(np.argmin(np.abs(sol.w))))
    return _gev_selection(model, np.asarray(S, dtype=np.intp), "geport")


def select_exhaustive(model: SignalModel, L: int) -> PortSelection:
    """Global optimum over all size-L subsets (guarded by a subset budget);
    ties resolve to the lexicographically smallest subset."""
    P = model.n_ports
    L = _check_L(L, P)
    n_subsets = math.comb(P, L)
    if n_subsets > EXHAUSTIVE_BUDGET:
        raise BudgetExceededError(
            f"C({P},{L}) = {n_subsets} exceeds the exhaustive budget of {EXHAUSTIVE_BUDGET}"
        )
    best_val = -math.inf
    best: tuple[int, ...] | None = None
    for combo in itertools.combinations(range(P), L):
        val = _subset_sinr_idx(model, np.asarray(combo, dtype=np.intp))
        if val > best_val:
            best_val = val
            best = combo
    assert best is not None
    return _gev_selection(model, np.asarray(best, dtype=np.intp), "exhaustive")


ALGORITHMS: dict[str, Callable[[SignalModel, int, int], PortSelection]] = {
    "sfama": lambda model, L, R: select_slow_fama(model),
    "dc": lambda model, L, R: select_dc(model, L),
    "cuma": lambda model, L, R: select_cuma(model, L),
    "gfwd": lambda model, L, R: select_gfwd(model, L),
    "gfwds": select_gfwd_swap,
    "geport": lambda model, L, R: select_geport(model, L),
    "exhaustive": lambda model, L, R: select_exhaustive(model, L),
}


def run_algorithm(name: str, model: SignalModel, L: int, R: int = 3) -> PortSelection:
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown algorithm {name!r}; valid: {', '.join(sorted(ALGORITHMS))}"
        ) from None
    return fn(model, L, R)
