"""Channel, SINR and feature computations.

This package never imports the simulator that produces its training files;
the math below is implemented independently from the shared interface
contract (sinc spatial correlation with eigenvalue clamping, canonical
precoding, optimal combining as a rank-one generalized eigenproblem, and the
documented per-port feature layout). Cross-component parity is enforced by
tests against golden files.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Scenario:
    """Generation-side scenario: P ports on aperture W (wavelengths), K
    users with N_t = K BS antennas, simulated user 0."""

    P: int
    L: int
    K: int
    W: float
    seed: int = 0


def correlation_factor(P: int, W: float) -> np.ndarray:
    """Square root of the PSD-clamped sinc correlation matrix."""
    d = np.arange(P) * (W / (P - 1))
    sigma = np.sinc(2.0 * (d[:, None] - d[None, :]))
    sigma = (sigma + sigma.T) / 2.0
    eigval, eigvec = np.linalg.eigh(sigma)
    return eigvec * np.sqrt(np.maximum(eigval, 0.0))[None, :]


def sample_channel(factor: np.ndarray, n_t: int, seed: int, trial: int) -> np.ndarray:
    """Correlated complex Gaussian channel, deterministic in (seed, trial)."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(trial),)))
    P = factor.shape[0]
    z = rng.standard_normal(size=(2, P, n_t))
    return factor @ ((z[0] + 1j * z[1]) / np.sqrt(2.0))


def interference_matrix(H: np.ndarray, snr_linear: float, user: int = 0) -> np.ndarray:
    """B = sum of interferer outer products plus the noise floor I/snr."""
    others = np.delete(H, user, axis=1)
    B = others @ others.conj().T + np.eye(H.shape[0]) / snr_linear
    return (B + B.conj().T) / 2.0


def subset_sinr(g: np.ndarray, B: np.ndarray, ports) -> float:
    """Optimal-combining SINR of a port subset: g_S^H B_S^-1 g_S."""
    idx = np.sort(np.asarray(list(ports), dtype=np.intp))
    g_s = g[idx]
    if not np.any(g_s):
        return 0.0
    B_s = B[np.ix_(idx, idx)]
    x = np.linalg.solve(B_s, g_s)
    return float(max(np.real(np.vdot(g_s, x)), 0.0))


def gev_combiner(g: np.ndarray, B: np.ndarray, ports) -> tuple[float, np.ndarray]:
    """SINR and unit-norm optimal combiner for a port subset."""
    idx = np.sort(np.asarray(list(ports), dtype=np.intp))
    g_s = g[idx]
    B_s = B[np.ix_(idx, idx)]
    if not np.any(g_s):
        w = np.zeros(idx.size, dtype=complex)
        w[0] = 1.0
        return 0.0, w
    x = np.linalg.solve(B_s, g_s)
    lam = float(max(np.real(np.vdot(g_s, x)), 0.0))
    return lam, x / np.linalg.norm(x)


def spectral_efficiency(sinr: float) -> float:
    return float(np.log2(1.0 + sinr))


def extract_features(H: np.ndarray, snr_db: float, user: int = 0) -> np.ndarray:
    """Per-port features: Frobenius-normalized channel row (re, im) plus
    per-port SINR, signal and interference, each divided by its port-wise
    maximum (zero maximum maps the column to zeros)."""
    snr = 10.0 ** (snr_db / 10.0)
    fro = np.linalg.norm(H)
    h_norm = H / fro if fro > 0 else H
    g = H[:, user]
    B = interference_matrix(H, snr, user)
    signal = np.abs(g) ** 2
    diag_b = np.real(np.diag(B))
    interference = np.maximum(diag_b - 1.0 / snr, 0.0)
    gamma = signal / diag_b

    def unit_max(col: np.ndarray) -> np.ndarray:
        m = col.max()
        return col / m if m > 0 else np.zeros_like(col)

    return np.concatenate(
        [
            np.real(h_norm),
            np.imag(h_norm),
            unit_max(gamma)[:, None],
            unit_max(signal)[:, None],
            unit_max(interference)[:, None],
        ],
        axis=1,
    )
