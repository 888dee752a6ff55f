"""Scenario configuration, spatial correlation, channel sampling and
signal/interference matrix assembly.

Conventions used throughout:
  - ports are 0-based everywhere, including file outputs;
  - only the SNR ratio enters the model (signal and noise powers are never
    stored separately);
  - the per-trial PRNG stream is ``SeedSequence(seed, spawn_key=(trial,))``,
    a pure function of (seed, trial), so execution order and parallelism
    cannot change results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import InvalidConfigError

_CONFIG_KEYS = ("P", "L", "K", "N_t", "W", "snr_db", "seed", "user_index")


def _frozen(a: np.ndarray) -> np.ndarray:
    """Mark an array immutable so instances are safe to share across threads."""
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters for one simulated receiver.

    P: number of candidate ports; L: simultaneously active ports (RF chains);
    K: users; N_t: BS antennas (defaults to K); W: aperture in wavelengths;
    snr_db: transmit SNR in dB; seed: master PRNG seed; user_index: which
    user's receiver is simulated (0-based).
    """

    P: int
    L: int
    K: int
    W: float
    snr_db: float
    seed: int = 0
    N_t: int | None = None
    user_index: int = 0

    def __post_init__(self) -> None:
        if self.N_t is None:
            object.__setattr__(self, "N_t", int(self.K))
        for name in ("P", "L", "K", "N_t", "seed", "user_index"):
            object.__setattr__(self, name, int(getattr(self, name)))
        object.__setattr__(self, "W", float(self.W))
        object.__setattr__(self, "snr_db", float(self.snr_db))
        if self.P < 2:
            raise InvalidConfigError(f"P must be >= 2, got {self.P}")
        if not (1 <= self.L <= self.P):
            raise InvalidConfigError(f"need 1 <= L <= P, got L={self.L}, P={self.P}")
        if self.K < 1:
            raise InvalidConfigError(f"K must be >= 1, got {self.K}")
        if self.N_t < 1:
            raise InvalidConfigError(f"N_t must be >= 1, got {self.N_t}")
        if self.W <= 0:
            raise InvalidConfigError(f"W must be > 0, got {self.W}")
        if not (0 <= self.user_index < self.N_t):
            raise InvalidConfigError(
                f"user_index must lie in [0, N_t), got {self.user_index} with N_t={self.N_t}"
            )

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemConfig":
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"P", "L", "K", "W", "snr_db"} - set(data)
        if missing:
            raise InvalidConfigError(f"missing config keys: {sorted(missing)}")
        return cls(
            P=data["P"],
            L=data["L"],
            K=data["K"],
            W=data["W"],
            snr_db=data["snr_db"],
            seed=data.get("seed", 0),
            N_t=data.get("N_t"),
            user_index=data.get("user_index", 0),
        )

    @classmethod
    def from_json_file(cls, path: str) -> "SystemConfig":
        return cls.from_dict(read_config_file(path))

    def to_dict(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in _CONFIG_KEYS}


def read_config_file(path: str) -> dict[str, Any]:
    """Raw config dict from a JSON file, with keys validated but the
    N_t-defaults-to-K rule not yet applied."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidConfigError(f"{path}: config file must hold a JSON object")
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise InvalidConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    return data


@dataclass(frozen=True)
class CorrelationModel:
    """Spatial correlation over a 1D aperture.

    ``sigma`` is the P x P sinc correlation matrix, ``factor`` a matrix square
    root of its PSD-clamped repair (factor @ factor.T == clamped sigma), and
    ``positions`` the normalized port positions p * W / (P - 1).
    """

    P: int
    W: float
    positions: np.ndarray
    sigma: np.ndarray
    factor: np.ndarray


def build_correlation(P: int, W: float) -> CorrelationModel:
    """Build the sinc spatial-correlation model for P ports on aperture W.

    Entries are sinc(2 * (d_p - d_q)) with the normalized sinc
    sin(pi x) / (pi x); the dense sinc kernel is numerically rank deficient,
    so eigenvalues are clamped at zero and the cached factor is
    V @ diag(sqrt(max(eig, 0))).
    """
    P = int(P)
    if P < 2:
        raise InvalidConfigError(f"P must be >= 2, got {P}")
    W = float(W)
    if W <= 0:
        raise InvalidConfigError(f"W must be > 0, got {W}")
    d = np.arange(P) * (W / (P - 1))
    sigma = np.sinc(2.0 * (d[:, None] - d[None, :]))
    sigma = (sigma + sigma.T) / 2.0
    eigval, eigvec = np.linalg.eigh(sigma)
    eigval = np.maximum(eigval, 0.0)
    factor = eigvec * np.sqrt(eigval)[None, :]
    return CorrelationModel(
        P=P, W=W, positions=_frozen(d), sigma=_frozen(sigma), factor=_frozen(factor)
    )


@dataclass(frozen=True)
class ChannelRealization:
    """One user's P x N_t channel draw plus the stream that produced it."""

    H: np.ndarray
    snr_db: float
    seed_path: tuple[int, int]


def channel_rng(seed: int, trial: int) -> np.random.Generator:
    """Per-trial generator: a pure function of (seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(trial),)))


def sample_channel(corr: CorrelationModel, cfg: SystemConfig, trial: int) -> ChannelRealization:
    """Draw H = factor @ G with G i.i.d. standard complex Gaussian.

    Columns of H are i.i.d. zero-mean complex Gaussian with covariance equal
    to the clamped correlation matrix. Regenerating with the same
    (cfg.seed, trial) reproduces H bit-identically.
    """
    if corr.P != cfg.P:
        raise InvalidConfigError(f"correlation P={corr.P} does not match config P={cfg.P}")
    rng = channel_rng(cfg.seed, trial)
    z = rng.standard_normal(size=(2, cfg.P, cfg.N_t))
    G = (z[0] + 1j * z[1]) / np.sqrt(2.0)
    H = corr.factor @ G
    return ChannelRealization(H=_frozen(H), snr_db=cfg.snr_db, seed_path=(int(cfg.seed), int(trial)))


@dataclass(frozen=True)
class SignalModel:
    """Signal and interference-plus-noise structure for one user.

    g: desired column of H; A = g g^H (rank one, Hermitian PSD);
    B = sum_{j != k} h_j h_j^H + I / snr (Hermitian PD, min eigenvalue
    >= 1/snr); interference keeps the interfering columns of H so the SINR
    quotient can be evaluated literally for any combiner.
    """

    g: np.ndarray
    A: np.ndarray
    B: np.ndarray
    snr_linear: float
    interference: np.ndarray

    @property
    def n_ports(self) -> int:
        return self.g.shape[0]


def _hermitize(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2.0


def build_signal_model(ch: ChannelRealization, cfg: SystemConfig) -> SignalModel:
    """Assemble (g, A, B) for cfg.user_index under canonical precoding.

    The desired vector is the user's column of H; every other column of H
    acts as an interferer (with N_t = K, the slow-FAMA default, those are
    exactly the other users' streams).
    """
    H = ch.H
    k = cfg.user_index
    if not (0 <= k < H.shape[1]):
        raise InvalidConfigError(f"user_index {k} out of range for N_t={H.shape[1]}")
    g = H[:, k].copy()
    A = _hermitize(np.outer(g, g.conj()))
    others = np.delete(H, k, axis=1)
    snr = 10.0 ** (ch.snr_db / 10.0)
    B = _hermitize(others @ others.conj().T + np.eye(H.shape[0]) / snr)
    return SignalModel(
        g=_frozen(g),
        A=_frozen(A),
        B=_frozen(B),
        snr_linear=float(snr),
        interference=_frozen(others),
    )


def make_instance(
    cfg: SystemConfig, trial: int, corr: CorrelationModel | None = None
) -> tuple[ChannelRealization, SignalModel]:
    """Convenience: correlation -> channel -> signal model for one trial."""
    if corr is None:
        corr = build_correlation(cfg.P, cfg.W)
    ch = sample_channel(corr, cfg, trial)
    return ch, build_signal_model(ch, cfg)
