"""Resonance fluorescence spectra from the regression theorem, plus closed forms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import steady_state
from .generators import Frame, Generator

# sigma_- = |g><e| and sigma_+ = |e><g| with index 0 = ground
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()
COND_LIMIT = 1e12
_TRACE_ROW = np.array([1, 0, 0, 1], dtype=complex)


class ConditioningError(RuntimeError):
    def __init__(self, nu: float, cond: float):
        self.nu, self.cond = nu, cond
        super().__init__(f"resolvent solve ill-conditioned at nu={nu!r} (cond={cond:.3g})")


class PeakError(ValueError):
    """Requested spectral peak could not be located or resolved."""


@dataclass(frozen=True)
class Spectrum:
    """Inelastic g(nu) on a grid of offsets from the drive; the coherent
    delta at nu = 0 carries weight 2*pi*elastic_weight and is kept separate."""
    nu: np.ndarray
    values: np.ndarray
    elastic_weight: float

    def __post_init__(self):
        nu = np.asarray(self.nu, dtype=float)
        if nu.size > 1 and np.any(np.diff(nu) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


def spectrum_numeric(G: Generator, nu: Sequence[float]) -> Spectrum:
    """g(nu) = -2 Re Tr[sigma_- (i nu + R)^-1 (sigma_+ rho_ss - rho_ss <sigma_+>)].

    The fluctuation part of sigma_+ rho_ss is traceless, so the solve is done on
    the traceless subspace with a bordered system, which stays regular at nu = 0.
    """
    if G.frame is not Frame.LAB:
        raise ValueError("spectrum needs a generator in the lab (drive-rotating) frame")
    rho = steady_state(G).matrix()
    r = rho.reshape(-1)
    mean = np.trace(SIGMA_PLUS @ rho)
    v = (SIGMA_PLUS @ rho).reshape(-1) - r * mean
    M = np.zeros((5, 5), dtype=complex)
    M[:4, :4] = G.R
    M[:4, 4] = r
    M[4, :4] = _TRACE_ROW
    rhs = np.append(v, 0)
    nu = np.asarray(nu, dtype=float)
    out = np.empty(nu.shape)
    for i, x in enumerate(nu):
        M[:4, :4] = G.R + 1j * x * np.eye(4)
        cond = np.linalg.cond(M)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise ConditioningError(float(x), float(cond))
        w = np.linalg.solve(M, rhs)[:4].reshape(2, 2)
        out[i] = -2 * np.real(np.trace(SIGMA_MINUS @ w))
    return Spectrum(nu, out, float(abs(mean) ** 2))


def relaxation_scale(G: Generator) -> float:
    d = G.derived_rates
    for key in ("Gamma_tilde", "gamma_tilde"):
        if key in d:
            return float(d[key])
    return float((d["kappa_up"] + d["kappa_down"]) / 2 + d["kappa_star"])


def default_grid(omega: float, rate: float, points: int = 2001) -> np.ndarray:
    half = max(4 * omega, 20 * rate)
    return np.linspace(-half, half, points)


def g0_closed_form(rabi, gamma_down, nu):
    """Resonant inelastic spectrum for pure radiative decay."""
    G, W, x = gamma_down, rabi, np.asarray(nu, dtype=float)
    G2, W2, x2 = G * G, W * W, x * x
    num = G2 * (G2 + x2) * (G2 + 4 * x2) + 2 * W2 * ((G2 + W2) ** 2 - (G2 + 2 * W2) * x2 + 4 * x2 * x2)
    return 4 * G * num / _g_denominator(G2, W2, x2)


def g_eps_closed_form(rabi, gamma_down, eps, nu):
    """First-order correction in the bath slope eps; odd in nu."""
    G, W, x = gamma_down, rabi, np.asarray(nu, dtype=float)
    G2, W2, x2 = G * G, W * W, x * x
    num = G2 * (13 * G2 + 11 * W2) + 4 * x2 * (G2 + 3 * W2)
    return 2 * eps * G * W * x * num / _g_denominator(G2, W2, x2)


def _g_denominator(G2, W2, x2):
    return (G2 + 4 * x2) * (G2 + 2 * W2) * (G2 * (G2 + 4 * W2 + 5 * x2) + 4 * (x2 - W2) ** 2)


def doublet_closed_form(rabi, z0, delta, nu):
    """Strong-dephasing resonant spectrum with longitudinal asymmetry
    z_plus/z_minus = z0 (1 +- delta*rabi/z0)."""
    return sum(doublet_terms(rabi, z0, delta, nu))


def doublet_terms(rabi, z0, delta, nu):
    x = np.asarray(nu, dtype=float)
    W2, a = rabi * rabi, delta * rabi / z0
    lor = (2 * z0) ** 2 * x * x + (x * x - W2) ** 2
    t1 = z0 / ((2 * z0) ** 2 + x * x) * (1 - a * a)
    t2 = x * x * z0 / lor
    t3 = x * a * rabi * z0 / lor
    return t1, t2, t3


def _half_crossing(x0, x1, y0, y1, half):
    return x0 + (half - y0) * (x1 - x0) / (y1 - y0)


def linewidth(spectrum: Spectrum, peak: str = "central", min_points: int = 20) -> float:
    """FWHM of the central peak or of the red/blue side peak."""
    x, y = spectrum.nu, spectrum.values
    if x.size < 3:
        raise PeakError("spectrum too short")
    interior = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])) + 1
    if interior.size == 0:
        raise PeakError("no local maximum in the spectrum")
    central = interior[np.argmin(np.abs(x[interior]))]
    if peak == "central":
        k = central
    elif peak in ("red", "blue"):
        side = interior[x[interior] < x[central]] if peak == "red" else interior[x[interior] > x[central]]
        if side.size == 0:
            raise PeakError(f"no {peak} side peak")
        k = side[np.argmax(y[side])]
    else:
        raise ValueError(f"unknown peak {peak!r}")
    half = y[k] / 2
    lo = k
    while lo > 0 and y[lo] > half:
        lo -= 1
    hi = k
    while hi < y.size - 1 and y[hi] > half:
        hi += 1
    if y[lo] > half or y[hi] > half:
        raise PeakError(f"{peak} peak does not fall to half maximum inside the grid")
    if hi - lo - 1 < min_points:
        raise PeakError(f"{peak} peak resolved by only {hi - lo - 1} points above half maximum")
    left = _half_crossing(x[lo], x[lo + 1], y[lo], y[lo + 1], half)
    right = _half_crossing(x[hi - 1], x[hi], y[hi - 1], y[hi], half)
    return float(right - left)
