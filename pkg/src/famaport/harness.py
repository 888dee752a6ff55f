"""Monte Carlo sweeps, statistics, timing benchmark, feature extraction and
dataset export.

File formats:
  - sweep CSV: header ``swept_param,value,algorithm,mean_se,std_se,trials,
    mean_runtime_us,seed``;
  - dataset: JSON Lines, one record per line with keys ``snr_db, H_re, H_im,
    oracle_ports, oracle_sinr, features, seed, trial``; arrays row-major,
    floats at full double precision (shortest round-trip decimal form, which
    parses back bit-exactly);
  - golden feature file: same JSONL restricted to ``H_re, H_im, snr_db,
    features``.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .model import (
    ChannelRealization,
    CorrelationModel,
    SignalModel,
    SystemConfig,
    build_correlation,
    build_signal_model,
    sample_channel,
)
from .selectors import ALGORITHMS, run_algorithm

SWEEPABLE = ("snr_db", "K", "L", "P", "R")

SWEEP_CSV_HEADER = (
    "swept_param",
    "value",
    "algorithm",
    "mean_se",
    "std_se",
    "trials",
    "mean_runtime_us",
    "seed",
)

DATASET_KEYS = ("snr_db", "H_re", "H_im", "oracle_ports", "oracle_sinr", "features", "seed", "trial")
GOLDEN_KEYS = ("H_re", "H_im", "snr_db", "features")


@dataclass(frozen=True)
class PortFeatures:
    """Per-port feature matrix of shape P x (2 N_t + 3).

    Columns: the real and imaginary parts of the Frobenius-normalized channel
    row, then per-port SINR, signal and interference, each divided by its
    maximum over ports (an all-zero column when that maximum is zero).
    """

    matrix: np.ndarray
    n_t: int


def extract_features(ch: ChannelRealization, model: SignalModel) -> PortFeatures:
    H = ch.H
    fro = np.linalg.norm(H)
    h_norm = H / fro if fro > 0 else H
    signal = np.real(np.diag(model.A)).copy()
    noise = 1.0 / model.snr_linear
    interference = np.maximum(np.real(np.diag(model.B)) - noise, 0.0)
    gamma = signal / np.real(np.diag(model.B))

    def _unit_max(col: np.ndarray) -> np.ndarray:
        m = col.max()
        return col / m if m > 0 else np.zeros_like(col)

    matrix = np.concatenate(
        [
            np.real(h_norm),
            np.imag(h_norm),
            _unit_max(gamma)[:, None],
            _unit_max(signal)[:, None],
            _unit_max(interference)[:, None],
        ],
        axis=1,
    )
    return PortFeatures(matrix=matrix, n_t=H.shape[1])


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: vary one parameter over `values` for each algorithm,
    averaging SE over `trials` channel realizations per point."""

    base: SystemConfig
    swept_parameter: str
    values: tuple
    algorithms: tuple[str, ...]
    trials: int
    R: int = 3
    threads: int = 1

    def __post_init__(self) -> None:
        if self.swept_parameter not in SWEEPABLE:
            raise InvalidArgumentError(
                f"swept_parameter must be one of {SWEEPABLE}, got {self.swept_parameter!r}"
            )
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.values:
            raise InvalidArgumentError("values must be nonempty")
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be >= 1, got {self.trials}")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise InvalidArgumentError(f"unknown algorithm ids: {unknown}")
        if not self.algorithms:
            raise InvalidArgumentError("algorithms must be nonempty")
        if self.threads < 1:
            raise InvalidArgumentError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class SweepRecord:
    swept_param: str
    value: float | int
    algorithm: str
    mean_se: float
    std_se: float
    trials: int
    mean_runtime_us: float
    seed: int


def config_for_value(base: SystemConfig, param: str, value) -> tuple[SystemConfig, int]:
    """Config and swap-round count for one swept point.

    Sweeping K moves N_t with it when the base follows the N_t = K default;
    sweeping R leaves the config untouched and only changes the swap rounds.
    """
    if param == "R":
        return base, int(value)
    kwargs: dict[str, Any] = {}
    if param == "snr_db":
        kwargs["snr_db"] = float(value)
    elif param == "K":
        kwargs["K"] = int(value)
        if base.N_t == base.K:
            kwargs["N_t"] = int(value)
    elif param in ("L", "P"):
        kwargs[param] = int(value)
    return replace(base, **kwargs), -1


def _trial_point(
    cfg: SystemConfig,
    corr: CorrelationModel,
    algorithms: Sequence[str],
    R: int,
    trial: int,
) -> dict[str, tuple[float, float]]:
    ch = sample_channel(corr, cfg, trial)
    model = build_signal_model(ch, cfg)
    out: dict[str, tuple[float, float]] = {}
    for alg in algorithms:
        t0 = time.perf_counter()
        sel = run_algorithm(alg, model, cfg.L, R)
        out[alg] = (sel.se, (time.perf_counter() - t0) * 1e6)
    return out


def run_sweep(spec: SweepSpec) -> list[SweepRecord]:
    """Run the sweep; outputs are a pure function of (spec minus threads),
    runtime fields aside."""
    records: list[SweepRecord] = []
    for value in spec.values:
        cfg, r_value = config_for_value(spec.base, spec.swept_parameter, value)
        R = spec.R if r_value < 0 else r_value
        corr = build_correlation(cfg.P, cfg.W)
        trials = range(spec.trials)
        if spec.threads > 1:
            with ThreadPoolExecutor(max_workers=spec.threads) as pool:
                results = list(
                    pool.map(lambda t: _trial_point(cfg, corr, spec.algorithms, R, t), trials)
                )
        else:
            results = [_trial_point(cfg, corr, spec.algorithms, R, t) for t in trials]
        for alg in spec.algorithms:
            ses = [res[alg][0] for res in results]
            runtimes = [res[alg][1] for res in results]
            std = statistics.stdev(ses) if len(ses) > 1 else 0.0
            records.append(
                SweepRecord(
                    swept_param=spec.swept_parameter,
                    value=value,
                    algorithm=alg,
                    mean_se=float(np.mean(ses)),
                    std_se=float(std),
                    trials=spec.trials,
                    mean_runtime_us=float(np.mean(runtimes)),
                    seed=spec.base.seed,
                )
            )
    return records


def write_sweep_csv(records: Iterable[SweepRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.swept_param,
                    repr(r.value) if isinstance(r.value, float) else r.value,
                    r.algorithm,
                    repr(r.mean_se),
                    repr(r.std_se),
                    r.trials,
                    repr(r.mean_runtime_us),
                    r.seed,
                ]
            )


@dataclass(frozen=True)
class DatasetRecord:
    """One labeled sample: the channel, its SNR, the swap-refined greedy
    oracle labels and the per-port features."""

    snr_db: float
    H: np.ndarray
    oracle_ports: tuple[int, ...]
    oracle_sinr: float
    features: np.ndarray
    seed: int
    trial: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "snr_db": self.snr_db,
            "H_re": np.real(self.H).tolist(),
            "H_im": np.imag(self.H).tolist(),
            "oracle_ports": list(self.oracle_ports),
            "oracle_sinr": self.oracle_sinr,
            "features": self.features.tolist(),
            "seed": self.seed,
            "trial": self.trial,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "DatasetRecord":
        H = np.asarray(data["H_re"], dtype=float) + 1j * np.asarray(data["H_im"], dtype=float)
        return cls(
            snr_db=float(data["snr_db"]),
            H=H,
            oracle_ports=tuple(int(p) for p in data["oracle_ports"]),
            oracle_sinr=float(data["oracle_sinr"]),
            features=np.asarray(data["features"], dtype=float),
            seed=int(data["seed"]),
            trial=int(data["trial"]),
        )


def _dataset_record(cfg: SystemConfig, corr: CorrelationModel, trial: int, R: int) -> DatasetRecord:
    ch = sample_channel(corr, cfg, trial)
    model = build_signal_model(ch, cfg)
    sel = run_algorithm("gfwds", model, cfg.L, R)
    feats = extract_features(ch, model)
    return DatasetRecord(
        snr_db=cfg.snr_db,
        H=ch.H,
        oracle_ports=sel.ports.canonical(),
        oracle_sinr=sel.sinr,
        features=feats.matrix,
        seed=cfg.seed,
        trial=trial,
    )


def generate_dataset(
    cfg: SystemConfig, n: int, snr_list: Sequence[float], R: int = 3
) -> list[DatasetRecord]:
    """n labeled records with the SNR cycled uniformly over snr_list."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not snr_list:
        raise InvalidArgumentError("snr_list must be nonempty")
    corr = build_correlation(cfg.P, cfg.W)
    records = []
    for i in range(n):
        cfg_i = replace(cfg, snr_db=float(snr_list[i % len(snr_list)]))
        records.append(_dataset_record(cfg_i, corr, i, R))
    return records


def export_dataset(
    cfg: SystemConfig, n: int, snr_list: Sequence[float], R: int, path: str
) -> list[DatasetRecord]:
    """Write the labeled JSONL dataset; rerunning with the same config yields
    a byte-identical file."""
    records = generate_dataset(cfg, n, snr_list, R)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json_dict()) + "\n")
    except OSError as exc:
        raise OSError(f"failed to write dataset to {path}: {exc}") from exc
    return records


def export_golden(
    cfg: SystemConfig, n: int, snr_list: Sequence[float], path: str
) -> None:
    """Write the reduced golden feature file (channel + SNR + features only)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not snr_list:
        raise InvalidArgumentError("snr_list must be nonempty")
    corr = build_correlation(cfg.P, cfg.W)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for i in range(n):
                cfg_i = replace(cfg, snr_db=float(snr_list[i % len(snr_list)]))
                ch = sample_channel(corr, cfg_i, i)
                model = build_signal_model(ch, cfg_i)
                feats = extract_features(ch, model)
                obj = {
                    "H_re": np.real(ch.H).tolist(),
                    "H_im": np.imag(ch.H).tolist(),
                    "snr_db": cfg_i.snr_db,
                    "features": feats.matrix.tolist(),
                }
                fh.write(json.dumps(obj) + "\n")
    except OSError as exc:
        raise OSError(f"failed to write golden file to {path}: {exc}") from exc


def load_dataset(path: str) -> list[DatasetRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(DatasetRecord.from_json_dict(json.loads(line)))
            except (ValueError, KeyError) as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: malformed record: {exc}") from exc
    return records


@dataclass(frozen=True)
class TimingRow:
    algorithm: str
    median_us: float
    mean_us: float
    trials: int


def bench_timing(
    cfg: SystemConfig, algorithms: Sequence[str], trials: int, R: int = 3
) -> list[TimingRow]:
    """Median wall-clock time per selector call over shared channel draws."""
    if trials < 10:
        raise InvalidArgumentError(f"bench needs trials >= 10, got {trials}")
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise InvalidArgumentError(f"unknown algorithm ids: {unknown}")
    corr = build_correlation(cfg.P, cfg.W)
    instances = []
    for t in range(trials):
        ch = sample_channel(corr, cfg, t)
        instances.append(build_signal_model(ch, cfg))
    rows = []
    for alg in algorithms:
        samples = []
        for model in instances:
            t0 = time.perf_counter()
            run_algorithm(alg, model, cfg.L, R)
            samples.append((time.perf_counter() - t0) * 1e6)
        rows.append(
            TimingRow(
                algorithm=alg,
                median_us=float(np.median(samples)),
                mean_us=float(np.mean(samples)),
                trials=trials,
            )
        )
    return rows


def format_timing_table(rows: Sequence[TimingRow]) -> str:
    lines = [f"{'method':<12}{'median (ms)':>14}{'mean (ms)':>14}{'trials':>8}"]
    for r in rows:
        lines.append(
            f"{r.algorithm:<12}{r.median_us / 1e3:>14.3f}{r.mean_us / 1e3:>14.3f}{r.trials:>8d}"
        )
    return "\n".join(lines)
