"""Time evolution and stationary states for 4x4 generators."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .generators import Frame, Generator, QubitState

EIG_COND_LIMIT = 1e8
KERNEL_RTOL = 1e-10


class SteadyStateError(RuntimeError):
    """The generator does not have a unique stationary state."""

    def __init__(self, kernel_dim: int, message: str = ""):
        self.kernel_dim = kernel_dim
        super().__init__(message or f"generator kernel has dimension {kernel_dim}, expected 1")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: tuple
    frame: Frame

    @property
    def n(self) -> np.ndarray:
        return np.array([s.n for s in self.states])

    @property
    def alpha(self) -> np.ndarray:
        return np.array([s.alpha for s in self.states])


class _Exponential:
    """exp(R t) for many t, by eigendecomposition when it is well conditioned."""

    def __init__(self, R):
        self.R = np.asarray(R)
        w, V = np.linalg.eig(self.R)
        if np.linalg.cond(V) < EIG_COND_LIMIT:
            self.w, self.V, self.Vinv = w, V, np.linalg.inv(V)
        else:
            self.w = None

    def __call__(self, t: float) -> np.ndarray:
        if self.w is None:
            return expm(self.R * t)
        return (self.V * np.exp(self.w * t)) @ self.Vinv


def propagator(G: Generator, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("propagation time must be >= 0")
    if t == 0:
        return np.eye(4, dtype=complex)
    return _Exponential(G.R)(t)


def evolve(G: Generator, rho0, times: Sequence[float]) -> Trajectory:
    """Sample vec(rho(t)) = exp(R t) vec(rho0) on ``times``; rho0 is a QubitState or 2x2 matrix."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1d sequence")
    if np.any(times < 0):
        raise ValueError("times must be nonnegative")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    rho0 = rho0.matrix() if isinstance(rho0, QubitState) else np.asarray(rho0, dtype=complex)
    if not np.allclose(rho0, rho0.conj().T, atol=1e-12) or abs(np.trace(rho0) - 1) > 1e-12:
        raise ValueError("initial state must be Hermitian with unit trace")
    v0 = rho0.reshape(-1)
    ex = _Exponential(G.R)
    states = []
    for t in times:
        v = v0 if t == 0 else ex(t) @ v0
        states.append(QubitState.from_vec(v))
    return Trajectory(times, tuple(states), G.frame)


def kernel_dimension(R, rtol: float = KERNEL_RTOL) -> int:
    sv = np.linalg.svd(np.asarray(R), compute_uv=False)
    if sv[0] == 0:
        return len(sv)
    return int(np.sum(sv < rtol * sv[0]))


def steady_state(G: Generator) -> QubitState:
    R = np.asarray(G.R)
    _, sv, Vh = np.linalg.svd(R)
    dim = len(sv) if sv[0] == 0 else int(np.sum(sv < KERNEL_RTOL * sv[0]))
    if dim != 1:
        raise SteadyStateError(dim)
    v = Vh[-1].conj()
    tr = v[0] + v[3]
    if abs(tr) < 1e-12:
        raise SteadyStateError(1, "kernel vector is traceless; no normalizable stationary state")
    v = v / tr
    rho = v.reshape(2, 2)
    rho = 0.5 * (rho + rho.conj().T)
    return QubitState.from_matrix(rho)


def spectral_gap(G: Generator) -> float:
    """Slowest nonzero relaxation rate, -max Re(lambda) over the nonzero eigenvalues."""
    w = np.linalg.eigvals(np.asarray(G.R))
    w = w[np.argsort(np.abs(w))][1:]
    return float(-np.max(w.real))
