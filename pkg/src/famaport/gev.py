"""Hermitian generalized-eigenvalue machinery.

Provides subset restriction of Hermitian matrices, the dominant generalized
eigenpair (generic Cholesky-whitened path and the exact rank-1 closed form),
subset SINR evaluation and spectral efficiency.

All solves go through Cholesky back-substitution; no matrix is ever inverted
explicitly. Combiners are unit 2-norm with the largest-magnitude entry made
real nonnegative, so outputs are reproducible across solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import scipy.linalg as sla

from .errors import InvalidArgumentError, NumericDomainError
from .model import SignalModel

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PortSet:
    """A set of distinct port indices.

    The stored order is whatever the caller supplied (selection order, for
    traceability); equality, hashing and serialization use the sorted
    canonical form.
    """

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise InvalidArgumentError("PortSet must contain at least one port")
        if len(set(idx)) != len(idx):
            raise InvalidArgumentError(f"duplicate port indices: {idx}")
        if any(i < 0 for i in idx):
            raise InvalidArgumentError(f"negative port index in {idx}")
        object.__setattr__(self, "indices", idx)

    def canonical(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, p: object) -> bool:
        return p in self.indices

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PortSet):
            return self.canonical() == other.canonical()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical())


Ports = Union[PortSet, Sequence[int], np.ndarray]


def _canonical_indices(S: Ports) -> np.ndarray:
    """Sorted distinct indices of a port set, validated."""
    if isinstance(S, PortSet):
        return np.asarray(S.canonical(), dtype=np.intp)
    idx = np.asarray(list(S), dtype=np.intp)
    if idx.size == 0:
        raise InvalidArgumentError("port set must be nonempty")
    if np.unique(idx).size != idx.size:
        raise InvalidArgumentError(f"duplicate port indices: {idx.tolist()}")
    if (idx < 0).any():
        raise InvalidArgumentError(f"negative port index in {idx.tolist()}")
    return np.sort(idx)


@dataclass(frozen=True)
class GevSolution:
    """Dominant generalized eigenpair: lambda_max is the achieved SINR and w
    the unit-norm combiner. ``degenerate`` marks the zero-signal corner case
    (lambda = 0, w fixed to e1) so Monte Carlo loops never abort."""

    lambda_max: float
    w: np.ndarray
    degenerate: bool = False


def restrict(M: np.ndarray, S: Ports) -> np.ndarray:
    """Principal submatrix of M at the ports of S, in canonical order."""
    M = np.asarray(M)
    idx = _canonical_indices(S)
    if idx[-1] >= M.shape[0]:
        raise InvalidArgumentError(
            f"port index {int(idx[-1])} out of range for a {M.shape[0]}-port matrix"
        )
    return M[np.ix_(idx, idx)]


def _fix_phase(w: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude entry is real nonnegative."""
    i = int(np.argmax(np.abs(w)))
    a = w[i]
    m = abs(a)
    if m == 0.0:
        return w
    return w * (a.conjugate() / m)


def _cholesky_lower(B: np.ndarray) -> np.ndarray:
    try:
        return sla.cholesky(B, lower=True)
    except sla.LinAlgError as exc:
        raise NumericDomainError(f"matrix is not positive definite: {exc}") from exc


def dominant_gev(A_s: np.ndarray, B_s: np.ndarray) -> GevSolution:
    """Dominant generalized eigenpair of a Hermitian PSD/PD pair.

    Whitens with B = L L^H, takes the top Hermitian eigenpair of
    C = L^-1 A L^-H and back-transforms; the result globally maximizes the
    generalized Rayleigh quotient.
    """
    A_s = np.asarray(A_s, dtype=np.complex128)
    B_s = np.asarray(B_s, dtype=np.complex128)
    L = _cholesky_lower(B_s)
    X = sla.solve_triangular(L, A_s, lower=True)
    C = sla.solve_triangular(L, X.conj().T, lower=True).conj().T
    C = (C + C.conj().T) / 2.0
    eigval, eigvec = np.linalg.eigh(C)
    lam = float(max(eigval[-1], 0.0))
    y = eigvec[:, -1]
    w = sla.solve_triangular(L.conj().T, y, lower=False)
    w = w / np.linalg.norm(w)
    return GevSolution(lambda_max=lam, w=_fix_phase(w))


def rank1_gev(g_s: np.ndarray, B_s: np.ndarray) -> GevSolution:
    """Exact fast path for rank-one numerators A = g g^H.

    lambda = g^H B^-1 g and w proportional to B^-1 g (computed by Cholesky
    solve, never by inversion); matches dominant_gev(g g^H, B) up to a
    unit-modulus scalar on w.
    """
    g_s = np.asarray(g_s, dtype=np.complex128)
    B_s = np.asarray(B_s, dtype=np.complex128)
    if not np.any(g_s):
        e1 = np.zeros(g_s.shape[0], dtype=np.complex128)
        e1[0] = 1.0
        return GevSolution(lambda_max=0.0, w=e1, degenerate=True)
    try:
        c = sla.cho_factor(B_s, lower=True)
    except sla.LinAlgError as exc:
        raise NumericDomainError(f"matrix is not positive definite: {exc}") from exc
    x = sla.cho_solve(c, g_s)
    lam = float(max(np.real(np.vdot(g_s, x)), 0.0))
    w = x / np.linalg.norm(x)
    return GevSolution(lambda_max=lam, w=_fix_phase(w))


def subset_sinr(model: SignalModel, S: Ports) -> float:
    """Optimal-combining SINR of the port subset S (dominant generalized
    eigenvalue of the restricted pair, via the rank-1 closed form)."""
    idx = _canonical_indices(S)
    if idx[-1] >= model.n_ports:
        raise InvalidArgumentError(
            f"port index {int(idx[-1])} out of range for P={model.n_ports}"
        )
    return _subset_sinr_idx(model, idx)


def _subset_sinr_idx(model: SignalModel, idx: np.ndarray) -> float:
    """Fast inner path: idx must be a sorted in-range index array."""
    g_s = model.g[idx]
    if not np.any(g_s):
        return 0.0
    B_s = model.B[np.ix_(idx, idx)]
    try:
        c = sla.cho_factor(B_s, lower=True)
    except sla.LinAlgError as exc:
        raise NumericDomainError(f"matrix is not positive definite: {exc}") from exc
    return float(max(np.real(np.vdot(g_s, sla.cho_solve(c, g_s))), 0.0))


def spectral_efficiency(sinr: float) -> float:
    """log2(1 + sinr), in bits/s/Hz."""
    if sinr < 0:
        raise InvalidArgumentError(f"sinr must be nonnegative, got {sinr}")
    return math.log1p(sinr) / _LN2


def combiner_sinr(model: SignalModel, S: Ports, w: np.ndarray) -> float:
    """SINR quotient for an arbitrary combiner w on the ports S (canonical
    order).

    Evaluated literally from the desired and interfering channel columns,
    with the noise term written ||w||^2 / snr so the quotient is invariant
    to rescaling w; at the unit-norm constraint this is exactly 1/snr.
    """
    idx = _canonical_indices(S)
    w = np.asarray(w, dtype=np.complex128)
    if w.shape[0] != idx.size:
        raise InvalidArgumentError(f"combiner length {w.shape[0]} != |S| = {idx.size}")
    num = abs(np.vdot(w, model.g[idx])) ** 2
    inter = model.interference[idx, :]
    den = float(np.sum(np.abs(w.conj() @ inter) ** 2))
    den += float(np.real(np.vdot(w, w))) / model.snr_linear
    return num / den
