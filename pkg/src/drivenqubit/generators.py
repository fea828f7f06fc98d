"""Superoperators for a driven, damped qubit.

Conventions used throughout the package:

* basis index 0 is the ground state, 1 the excited state, so
  ``rho = [[1 - n, alpha], [conj(alpha), n]]``;
* ``vec(rho) = (rho00, rho01, rho10, rho11)`` (row-major reshape);
* lab-frame generators act in the frame rotating at the drive frequency,
  dressed-frame generators act on ``[[d, x], [conj(x), u]]`` in the basis
  that diagonalizes the driven Hamiltonian (``u`` is the upper dressed level).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .spectral import LabRates, RateSet

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
# lowering / raising in the dressed basis, as used by the dressed dissipator
_SM = np.array([[0, 1], [0, 0]], dtype=complex)
_SP = _SM.T.copy()
_PHASE = np.array([[1.0, -1.0], [-1.0, 1.0]])


class DegenerateDriveError(ValueError):
    """The dressed splitting is zero, so the dressing angle is undefined."""


class Frame(str, Enum):
    LAB = "lab-rotating"
    DRESSED = "dressed"


class Backend(str, Enum):
    LAB = "lab"
    ROTATING = "rotating"
    GENERALIZED = "generalized"
    APPENDIX = "redfield-appendix"


@dataclass(frozen=True)
class DriveParams:
    rabi: float
    detuning: float = 0.0
    omega_d: float = 1000.0

    def __post_init__(self):
        if not np.isfinite([self.rabi, self.detuning, self.omega_d]).all():
            raise ValueError("drive parameters must be finite")
        if self.rabi < 0:
            raise ValueError("rabi frequency must be >= 0")
        if self.omega_d <= 0:
            raise ValueError("drive frequency must be > 0")

    @property
    def omega(self) -> float:
        return float(np.hypot(self.rabi, self.detuning))

    @property
    def beta(self) -> float:
        return float(np.arctan2(self.detuning, self.rabi))

    @property
    def omega0(self) -> float:
        return self.omega_d - self.detuning

    def require_splitting(self, what: str) -> None:
        if self.omega == 0:
            raise DegenerateDriveError(
                f"{what} needs rabi or detuning nonzero (dressing angle undefined); "
                "use lab_generator for an undriven resonant qubit")


@dataclass(frozen=True)
class QubitState:
    """Density matrix in (n, alpha) form. In the dressed frame these hold (u, x)."""
    n: float
    alpha: complex = 0j

    @classmethod
    def from_matrix(cls, rho) -> "QubitState":
        rho = np.asarray(rho)
        return cls(float(np.real(rho[1, 1])), complex(rho[0, 1]))

    @classmethod
    def from_vec(cls, v) -> "QubitState":
        return cls.from_matrix(np.asarray(v).reshape(2, 2))

    def matrix(self) -> np.ndarray:
        a = complex(self.alpha)
        return np.array([[1 - self.n, a], [a.conjugate(), self.n]], dtype=complex)

    def vec(self) -> np.ndarray:
        return self.matrix().reshape(-1)

    def is_physical(self, tol: float = 1e-12) -> bool:
        det = self.n * (1 - self.n) - abs(self.alpha) ** 2
        return -tol <= self.n <= 1 + tol and det >= -tol


@dataclass(frozen=True)
class Generator:
    R: np.ndarray
    frame: Frame
    backend: Backend
    derived_rates: dict = field(default_factory=dict)
    beta: float | None = None

    def __post_init__(self):
        R = np.array(self.R, dtype=complex)
        if R.shape != (4, 4):
            raise ValueError("generator must be 4x4")
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    def apply(self, rho) -> np.ndarray:
        return (self.R @ np.asarray(rho).reshape(-1)).reshape(2, 2)


def superop(f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Matrix of the linear map ``f`` on 2x2 matrices in the vec convention."""
    R = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        E = np.zeros(4, dtype=complex)
        E[k] = 1.0
        R[:, k] = np.asarray(f(E.reshape(2, 2))).reshape(-1)
    return R


def _bloch_superop(dn, dalpha):
    """Lift affine Bloch equations to a linear map on vec(rho).

    ``dn(n, a, ab, tr)`` and ``dalpha(n, a, tr)`` must be linear in their
    arguments, with constants multiplying ``tr``. The equation for conj(alpha)
    follows by conjugation, which keeps the map Hermiticity preserving.
    """
    def f(r):
        n, a, ab, tr = r[1, 1], r[0, 1], r[1, 0], r[0, 0] + r[1, 1]
        d = dn(n, a, ab, tr)
        da = dalpha(n, a, tr)
        dab = np.conj(dalpha(np.conj(n), np.conj(ab), np.conj(tr)))
        return np.array([[-d, da], [dab, d]])
    return superop(f)


def lab_generator(rates: LabRates, drive: DriveParams) -> Generator:
    gd, gu, g0 = rates.gamma_down, rates.gamma_up, rates.gamma_0
    W, dw = drive.rabi, drive.detuning
    gt = rates.gamma_tilde

    def dn(n, a, ab, tr):
        return -(gd + gu) * n + gu * tr - 0.5j * W * (a - ab)

    def dalpha(n, a, tr):
        return -(gt + 1j * dw) * a - 1j * W * (n - tr / 2)

    beta = drive.beta if drive.omega > 0 else None
    return Generator(_bloch_superop(dn, dalpha), Frame.LAB, Backend.LAB,
                     {"gamma_tilde": gt}, beta)


def generalized_gamma_tilde(rates: RateSet, drive: DriveParams,
                            printed_signs: bool = False) -> float:
    s, c = np.sin(drive.beta), np.cos(drive.beta)
    sd = 1 if printed_signs else -1
    return (rates.down / 2 * (1 + sd * rates.eps * s)
            + rates.up / 2 * (1 + rates.eps_e * s)
            + (rates.z_plus + rates.z_minus) * c ** 2
            + 2 * rates.z0 * s ** 2
            + rates.down / 4 * rates.upsilon)


def generalized_generator(rates: RateSet, drive: DriveParams,
                          printed_signs: bool = False) -> Generator:
    """Non-secular generator valid from the weak- to the strong-drive regime.

    ``printed_signs=True`` selects the alternative sign pattern for the slope
    terms (``down (1 + eps sin beta)`` and the ``eps_e`` signs of the two
    ``cos beta`` terms exchanged) instead of the one that follows from the
    Born-Markov derivation; the two coincide when ``eps = eps_e = 0`` or on
    resonance with ``eps_e = 0``.
    """
    drive.require_splitting("generalized_generator")
    W, dw = drive.rabi, drive.detuning
    s, c = np.sin(drive.beta), np.cos(drive.beta)
    Gd, Gu, G0, Gp, Gm = rates.down, rates.up, rates.z0, rates.z_plus, rates.z_minus
    e, ee = rates.eps, rates.eps_e
    gt = generalized_gamma_tilde(rates, drive, printed_signs)
    if printed_signs:
        down_eff = Gd * (1 + e * s)
        re_coupling = c * (Gd * e + Gu * ee) / 2
        drift = c * (Gd * e - Gu * ee) / 4
    else:
        down_eff = Gd * (1 - e * s)
        re_coupling = c * (Gd * e - Gu * ee) / 2
        drift = c * (Gd * e + Gu * ee) / 4
    up_eff = Gu * (1 + ee * s)
    mix = s * c * (Gp + Gm - 2 * G0)
    drift += c * (Gp - Gm) / 2

    def dn(n, a, ab, tr):
        return (-(down_eff + up_eff) * n + up_eff * tr - 0.5j * W * (a - ab)
                - (a + ab) / 2 * re_coupling)

    def dalpha(n, a, tr):
        return (-(gt + 1j * dw) * a - 1j * W * (n - tr / 2)
                + (n - tr / 2) * mix - drift * tr)

    return Generator(_bloch_superop(dn, dalpha), Frame.LAB, Backend.GENERALIZED,
                     {"Gamma_tilde": gt}, drive.beta)


def _dressed_coefficients(rates: RateSet, s: float):
    """Coefficients of the time-independent dressed dissipator."""
    Gd, Gu, G0 = rates.down, rates.up, rates.z0
    Gp, Gm, e, ee = rates.z_plus, rates.z_minus, rates.eps, rates.eps_e
    c2 = 1 - s * s
    A = (s - 1) ** 2 / 8 * Gd * (1 + e) + (s + 1) ** 2 / 8 * Gu * (1 + ee) + c2 / 2 * Gp
    B = (s + 1) ** 2 / 8 * Gd * (1 - e) + (s - 1) ** 2 / 8 * Gu * (1 - ee) + c2 / 2 * Gm
    C = s * s * G0 + c2 / 4 * (Gd + Gu)
    return A, B, C


def kappas(rates: RateSet, drive: DriveParams) -> dict:
    """Secular rates into (up) and out of (down) the upper dressed level, and dephasing."""
    A, B, C = _dressed_coefficients(rates, np.sin(drive.beta))
    return {"kappa_up": 2 * A, "kappa_down": 2 * B, "kappa_star": 2 * C}


def _dressed_dissipator(rates: RateSet, drive: DriveParams, secular: bool):
    s, c = np.sin(drive.beta), np.cos(drive.beta)
    Gd, Gu, G0 = rates.down, rates.up, rates.z0
    Gp, Gm, e, ee = rates.z_plus, rates.z_minus, rates.eps, rates.eps_e
    A, B, C = _dressed_coefficients(rates, s)
    # single- and double-frequency (non-secular) coefficients
    P1 = c * ((s - 1) / 4 * Gd * (1 + e) + (s + 1) / 4 * Gu * (1 + ee) - s * Gp)
    P2 = c * ((s + 1) / 4 * Gd * (1 - e) + (s - 1) / 4 * Gu * (1 - ee) - s * Gm)
    P3 = c / 2 * ((s + 1) / 4 * Gu + (s - 1) / 4 * Gd - s * G0)
    P4 = c / 2 * ((s - 1) / 4 * Gu + (s + 1) / 4 * Gd - s * G0)
    Q1 = (s * s - 1) / 8 * (Gd * (1 + e) + Gu * (1 + ee)) + c * c / 2 * Gp
    Q2 = (s * s - 1) / 8 * (Gd * (1 - e) + Gu * (1 - ee)) + c * c / 2 * Gm

    def D(r):
        d, u, x, xc = r[0, 0], r[1, 1], r[0, 1], r[1, 0]
        tr = d + u
        out = -(d * SIGMA_Z + xc * _SP) * A + (u * SIGMA_Z - x * _SM) * B \
            - (x * _SM + xc * _SP) * C
        if not secular:
            out = out - d * _SM * P1 + u * _SP * P2 \
                - (_SP * tr + x * SIGMA_Z) * P3 + (_SM * tr - xc * SIGMA_Z) * P4
            out = out + xc * _SM * Q1 + x * _SP * Q2
        return out
    return D


def _dressing_matrix(beta: float) -> np.ndarray:
    ch, sh = np.cos(beta / 2), np.sin(beta / 2)
    return np.array([[ch + sh, sh - ch], [ch - sh, ch + sh]]) / np.sqrt(2)


def frame_superop(beta: float) -> np.ndarray:
    """Map vec(dressed rho) to vec(lab rho)."""
    S = _dressing_matrix(beta)
    return superop(lambda rt: S @ (rt * _PHASE) @ S.T)


def dressed_to_lab_matrix(rho_t, beta: float) -> np.ndarray:
    S = _dressing_matrix(beta)
    return S @ (np.asarray(rho_t) * _PHASE) @ S.T


def lab_to_dressed_matrix(rho, beta: float) -> np.ndarray:
    S = _dressing_matrix(beta)
    return (S.T @ np.asarray(rho) @ S) * _PHASE


def frame_transform(u: float, x: complex, beta: float) -> tuple[float, complex]:
    """Dressed populations/coherence (u, x) to lab-frame (n, alpha)."""
    s, c = np.sin(beta), np.cos(beta)
    n = 0.5 + (u - 0.5) * s - x.real * c
    alpha = -(u - 0.5) * c - x.real * s - 1j * x.imag
    return float(n), complex(alpha)


def inverse_frame_transform(n: float, alpha: complex, beta: float) -> tuple[float, complex]:
    s, c = np.sin(beta), np.cos(beta)
    alpha = complex(alpha)
    u = 0.5 + (n - 0.5) * s - alpha.real * c
    x = -(n - 0.5) * c - alpha.real * s - 1j * alpha.imag
    return float(u), complex(x)


def to_lab(G: Generator) -> Generator:
    if G.frame is Frame.LAB:
        return G
    T = frame_superop(G.beta)
    return Generator(T @ G.R @ np.linalg.inv(T), Frame.LAB, G.backend,
                     G.derived_rates, G.beta)


def to_dressed(G: Generator) -> Generator:
    if G.frame is Frame.DRESSED:
        return G
    if G.beta is None:
        raise DegenerateDriveError("generator has no dressing angle")
    T = frame_superop(G.beta)
    return Generator(np.linalg.inv(T) @ G.R @ T, Frame.DRESSED, G.backend,
                     G.derived_rates, G.beta)


def state_to_lab(state: QubitState, G: Generator) -> QubitState:
    if G.frame is Frame.LAB:
        return state
    return QubitState(*frame_transform(state.n, state.alpha, G.beta))


def rotating_generator(rates: RateSet, drive: DriveParams) -> Generator:
    """Secular Lindblad generator in the dressed frame."""
    drive.require_splitting("rotating_generator")
    k = kappas(rates, drive)
    ku, kd, ks = k["kappa_up"], k["kappa_down"], k["kappa_star"]
    w = drive.omega
    R = np.zeros((4, 4), dtype=complex)
    # d and u exchange population; x decays and precesses at the dressed splitting
    R[3, 0], R[3, 3] = ku, -kd
    R[0, 0], R[0, 3] = -ku, kd
    R[1, 1] = -((ku + kd) / 2 + ks + 1j * w)
    R[2, 2] = np.conj(R[1, 1])
    return Generator(R, Frame.DRESSED, Backend.ROTATING, k, drive.beta)


def redfield_appendix_generator(rates: RateSet, drive: DriveParams, secular: bool = False,
                                frame: Frame = Frame.LAB) -> Generator:
    """Dressed-frame Born-Markov construction with constant and oscillating terms.

    The oscillating factors are removed by working in the frame of the dressed
    Hamiltonian, so the dressed generator carries the coherent term
    ``-i[(omega/2) sigma_z, rho]``. ``secular=True`` keeps only the constant part.
    """
    drive.require_splitting("redfield_appendix_generator")
    if rates.upsilon != 0:
        raise ValueError("the dressed construction is first order in the bath slope; "
                         "upsilon must be 0")
    D = _dressed_dissipator(rates, drive, secular)
    H = drive.omega / 2 * SIGMA_Z

    def f(r):
        return -1j * (H @ r - r @ H) + D(r) + D(r.conj().T).conj().T

    derived = dict(kappas(rates, drive))
    if not secular:
        derived["Gamma_tilde"] = generalized_gamma_tilde(rates, drive)
    G = Generator(superop(f), Frame.DRESSED, Backend.APPENDIX, derived, drive.beta)
    return to_lab(G) if Frame(frame) is Frame.LAB else G


def build(backend: str | Backend, rates: RateSet, drive: DriveParams) -> Generator:
    """Generator for ``backend``; the lab backend uses ``rates.lab()``."""
    backend = Backend(backend)
    if backend is Backend.LAB:
        return lab_generator(rates.lab(), drive)
    if backend is Backend.ROTATING:
        return rotating_generator(rates, drive)
    if backend is Backend.GENERALIZED:
        return generalized_generator(rates, drive)
    return redfield_appendix_generator(rates, drive)
