"""Physicality checks, power flow and validity maps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import SteadyStateError, steady_state
from .generators import DriveParams, Generator, QubitState, state_to_lab
from .spectral import LorentzianCavity, RateSet, SpectralModel, ThermalLinear, eval_K

YES, MARGINAL, NO = "yes", "marginal", "no"


class ScanError(RuntimeError):
    """Every point of a parameter scan failed."""


def determinant(state: QubitState) -> float:
    return float(state.n * (1 - state.n) - abs(state.alpha) ** 2)


def power_flow(state: QubitState, rabi: float, omega_d: float) -> float:
    """Energy per unit time taken from the drive (hbar = 1)."""
    return float(omega_d * rabi * np.imag(state.alpha))


@dataclass(frozen=True)
class RegimeReport:
    lab_valid: str
    rotating_valid: str
    ratios: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"lab_valid": self.lab_valid, "rotating_valid": self.rotating_valid,
                "ratios": dict(self.ratios)}


def _grade(r: float, thresholds) -> str:
    lo, hi = thresholds
    return YES if r < lo else (MARGINAL if r < hi else NO)


def _variation_scale(model: SpectralModel, nu: float, h: float) -> float:
    """K/|dK/dnu| at nu by symmetric difference; inf for a locally flat K."""
    k = eval_K(model, nu)
    dk = (eval_K(model, nu + h) - eval_K(model, nu - h)) / (2 * h)
    if dk == 0:
        return np.inf
    return abs(k / dk)


def bath_scales(model: SpectralModel, omega_d: float) -> tuple[float, float]:
    """(omega_bath, T): frequency scales over which K varies near omega_d and near 0."""
    h = 1e-4 * max(1.0, abs(omega_d))
    if isinstance(model, LorentzianCavity):
        wb = abs(model.omega_bath(omega_d))
    else:
        wb = _variation_scale(model, omega_d, h)
    if isinstance(model, ThermalLinear):
        T = model.temperature
    else:
        T = _variation_scale(model, 0.0, h)
    return wb, T


def regime_report(rates: RateSet, drive: DriveParams, model: SpectralModel | None = None,
                  thresholds: tuple[float, float] = (0.1, 0.3)) -> RegimeReport:
    """Grade the assumptions behind the lab (omega small on the bath scales) and the
    rotating (rates small against omega) treatments.

    Without a spectral model the bath scales are inferred from the asymmetries
    already present in ``rates``.
    """
    w = drive.omega
    if model is not None:
        wb, T = bath_scales(model, drive.omega_d)
        r_bath = w / wb if np.isfinite(wb) else 0.0
        r_T = w / T if np.isfinite(T) else 0.0
    else:
        r_bath = max(abs(rates.eps), abs(rates.eps_e))
        zsum = rates.z_plus + rates.z_minus
        r_T = abs(rates.z_plus - rates.z_minus) / zsum if zsum > 0 else 0.0
    biggest = max(rates.down, rates.up, rates.z0, rates.z_plus, rates.z_minus,
                  rates.lab().gamma_tilde)
    r_rot = biggest / w if w > 0 else np.inf
    r_d = w / drive.omega_d
    ratios = {"omega/omega_bath": r_bath, "omega/T": r_T,
              "max_rate/omega": r_rot, "omega/omega_d": r_d}
    lab = _grade(max(r_bath, r_T), thresholds)
    rot = _grade(r_rot, thresholds)
    if r_d > 0.1:
        lab = rot = NO
    return RegimeReport(lab, rot, ratios)


OBSERVABLES = {
    "n_ss": lambda s, G: s.n,
    "det_ss": lambda s, G: determinant(s),
    "im_alpha_ss": lambda s, G: float(np.imag(s.alpha)),
}


@dataclass(frozen=True)
class ScanResult:
    axis1: tuple
    axis2: tuple
    values: np.ndarray
    status: dict  # (i, j) -> error kind for failed points

    def ok(self) -> np.ndarray:
        return np.isfinite(self.values)


def _evaluate(builder, observable, p1, p2):
    name1, v1 = p1
    name2, v2 = p2
    try:
        G = builder(**{name1: v1, name2: v2})
        s = state_to_lab(steady_state(G), G)
        return float(OBSERVABLES[observable](s, G)), None
    except (ValueError, SteadyStateError, np.linalg.LinAlgError, ArithmeticError) as exc:
        return np.nan, type(exc).__name__


def scan2d(builder: Callable[..., Generator], axis1: tuple[str, Sequence[float]],
           axis2: tuple[str, Sequence[float]], observable: str = "n_ss",
           map_fn: Callable = map) -> ScanResult:
    """Steady-state observable on the grid axis1 x axis2 (row-major, axis1 = rows).

    ``builder(**{name1: v1, name2: v2})`` returns the generator for one point.
    ``map_fn`` may be an executor's ``map``; results are assembled by index.
    """
    if observable not in OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}; choose from {sorted(OBSERVABLES)}")
    (n1, vals1), (n2, vals2) = axis1, axis2
    vals1, vals2 = tuple(float(v) for v in vals1), tuple(float(v) for v in vals2)
    if not vals1 or not vals2:
        raise ValueError("scan axes must be nonempty")
    points = list(itertools.product(range(len(vals1)), range(len(vals2))))
    results = list(map_fn(lambda ij: _evaluate(builder, observable, (n1, vals1[ij[0]]),
                                                (n2, vals2[ij[1]])), points))
    grid = np.full((len(vals1), len(vals2)), np.nan)
    status = {}
    for (i, j), (val, err) in zip(points, results):
        grid[i, j] = val
        if err is not None:
            status[(i, j)] = err
    if len(status) == len(points):
        raise ScanError(f"all {len(points)} scan points failed, e.g. {next(iter(status.values()))}")
    return ScanResult((n1, vals1), (n2, vals2), grid, status)
