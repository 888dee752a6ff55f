"""Randomized invariant suites behind the `verify` CLI subcommand.

Each suite draws fresh instances from a seeded generator, checks an
executable invariant and reports (ok, total, failures). A failure entry
carries enough detail (instance seed, trial, subset) to reproduce it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import gev, selectors
from .model import SystemConfig, build_correlation, build_signal_model, sample_channel

# Relative slack for the non-decreasing SINR property and the selector
# ordering checks.
MONOTONICITY_REL_TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    ok: int
    total: int
    failures: list[dict[str, Any]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        return f"{self.name}: {self.ok}/{self.total} ok"


def _random_instance(rng: np.random.Generator, P: int, K: int, snr_db: float, seed: int):
    cfg = SystemConfig(P=P, L=min(4, P), K=K, W=float(P) / 25.0 + 1.0, snr_db=snr_db, seed=seed)
    corr = build_correlation(cfg.P, cfg.W)
    trial = int(rng.integers(0, 2**31))
    ch = sample_channel(corr, cfg, trial)
    return cfg, trial, build_signal_model(ch, cfg)


def monotonicity_suite(trials: int, seed: int, P: int = 32, K: int = 4) -> SuiteResult:
    """Adding a port never decreases the optimal-combining SINR."""
    rng = np.random.default_rng(seed)
    failures: list[dict[str, Any]] = []
    ok = 0
    model = None
    inst_meta: tuple[int, float, int] = (0, 0.0, 0)
    for i in range(trials):
        if i % 10 == 0 or model is None:
            inst_seed = int(rng.integers(0, 2**31))
            snr_db = float(rng.uniform(0.0, 25.0))
            _, trial, model = _random_instance(rng, P, K, snr_db, inst_seed)
            inst_meta = (inst_seed, snr_db, trial)
        size = int(rng.integers(1, P))
        S = rng.choice(P, size=size, replace=False)
        p = int(rng.choice(np.setdiff1d(np.arange(P), S)))
        before = gev.subset_sinr(model, S)
        after = gev.subset_sinr(model, np.append(S, p))
        if after >= before * (1.0 - MONOTONICITY_REL_TOL):
            ok += 1
        else:
            failures.append(
                {
                    "seed": inst_meta[0],
                    "snr_db": inst_meta[1],
                    "trial": inst_meta[2],
                    "subset": sorted(int(x) for x in S),
                    "added_port": p,
                    "before": before,
                    "after": after,
                }
            )
    return SuiteResult("monotonicity", ok, trials, failures)


def gev_consistency_suite(trials: int, seed: int, max_ports: int = 16) -> SuiteResult:
    """rank-1 and generic GEV agree, and the literal SINR quotient at the
    returned combiner reproduces lambda."""
    rng = np.random.default_rng(seed)
    failures: list[dict[str, Any]] = []
    ok = 0
    for _ in range(trials):
        P = int(rng.integers(2, max_ports + 1))
        K = int(rng.integers(1, 5))
        snr_db = float(rng.uniform(0.0, 25.0))
        inst_seed = int(rng.integers(0, 2**31))
        _, trial, model = _random_instance(rng, P, K, snr_db, inst_seed)
        size = int(rng.integers(1, P + 1))
        S = np.sort(rng.choice(P, size=size, replace=False))
        A_s = gev.restrict(model.A, S)
        B_s = gev.restrict(model.B, S)
        generic = gev.dominant_gev(A_s, B_s)
        fast = gev.rank1_gev(model.g[S], B_s)
        lam = fast.lambda_max
        scale = max(lam, 1e-300)
        lam_ok = abs(lam - generic.lambda_max) / scale <= 1e-9
        quot_ok = abs(gev.combiner_sinr(model, S, fast.w) - lam) / scale <= 1e-8
        if lam_ok and quot_ok:
            ok += 1
        else:
            failures.append(
                {
                    "seed": inst_seed,
                    "snr_db": snr_db,
                    "trial": trial,
                    "subset": [int(x) for x in S],
                    "lambda_rank1": lam,
                    "lambda_generic": generic.lambda_max,
                }
            )
    return SuiteResult("gev-consistency", ok, trials, failures)


def ordering_suite(
    trials: int, seed: int, P: int = 12, L: int = 3, K: int = 4, snr_db: float = 10.0
) -> SuiteResult:
    """Per-instance selector orderings: swap >= greedy, dc >= single-port,
    exhaustive >= everything, greedy trace non-decreasing, greedy starts at
    the best single port, and equal-gain combining never beats GEV."""
    rng = np.random.default_rng(seed)
    cfg = SystemConfig(P=P, L=L, K=K, W=2.0, snr_db=snr_db, seed=seed)
    corr = build_correlation(cfg.P, cfg.W)
    failures: list[dict[str, Any]] = []
    ok = 0
    tol = MONOTONICITY_REL_TOL
    for i in range(trials):
        trial = int(rng.integers(0, 2**31))
        ch = sample_channel(corr, cfg, trial)
        model = build_signal_model(ch, cfg)
        sfama = selectors.select_slow_fama(model)
        dc = selectors.select_dc(model, L)
        cuma = selectors.select_cuma(model, L)
        gfwd = selectors.select_gfwd(model, L)
        gfwds = selectors.select_gfwd_swap(model, L, R=3)
        best = selectors.select_exhaustive(model, L)
        steps = gfwd.trace["step_sinr"]
        checks = {
            "gfwds>=gfwd": gfwds.sinr >= gfwd.sinr * (1 - tol),
            "dc>=sfama": dc.sinr >= sfama.sinr * (1 - tol),
            "gfwd_first=sfama": gfwd.trace["selection_order"][0] == sfama.ports.indices[0],
            "trace_nondecreasing": all(
                b >= a * (1 - tol) for a, b in zip(steps, steps[1:])
            ),
            "cuma<=gev_on_same_ports": cuma.sinr
            <= gev.subset_sinr(model, cuma.ports) * (1 + tol),
            "exhaustive>=all": all(
                best.sinr >= s.sinr * (1 - tol) for s in (sfama, dc, cuma, gfwd, gfwds)
            ),
        }
        bad = [name for name, passed in checks.items() if not passed]
        if not bad:
            ok += 1
        else:
            failures.append({"seed": seed, "trial": trial, "violated": bad})
    return SuiteResult("orderings", ok, trials, failures)


def run_all(trials: int, seed: int) -> list[SuiteResult]:
    """Full verification: monotonicity at the given size, consistency and
    ordering suites at a tenth of it."""
    small = max(trials // 10, 1)
    return [
        monotonicity_suite(trials, seed),
        gev_consistency_suite(small, seed + 1),
        ordering_suite(small, seed + 2),
    ]
