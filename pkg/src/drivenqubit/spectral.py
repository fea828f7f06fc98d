"""Bath spectral densities K(nu) and the rates they induce on a driven qubit.

All frequencies and rates share one unit (hbar = k_B = 1), conventionally the
radiative rate Gamma_down of the scenario at hand.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np


class SpectralRangeError(ValueError):
    """Raised when a tabulated model is evaluated outside its samples."""


class NegativeSpectralWarning(UserWarning):
    """K(nu) came out negative and was clamped to zero."""


class SpectralModel:
    """Base class. Subclasses implement ``_raw(nu)``; models add with ``+``."""

    def _raw(self, nu: float) -> float:
        raise NotImplementedError

    def evaluate(self, nu: float) -> tuple[float, bool]:
        """Return ``(K, clamped)`` where ``clamped`` flags a negative raw value."""
        if not np.isfinite(nu):
            raise ValueError(f"frequency must be finite, got {nu!r}")
        k = float(self._raw(float(nu)))
        if k < 0.0:
            return 0.0, True
        return k, False

    def __call__(self, nu: float) -> float:
        return eval_K(self, nu)

    def __add__(self, other: "SpectralModel") -> "Composite":
        if not isinstance(other, SpectralModel):
            return NotImplemented
        left = self.components if isinstance(self, Composite) else (self,)
        right = other.components if isinstance(other, Composite) else (other,)
        return Composite(left + right)


@dataclass(frozen=True)
class Flat(SpectralModel):
    K0: float

    def _raw(self, nu):
        return self.K0


@dataclass(frozen=True)
class LorentzianCavity(SpectralModel):
    """Peaked bath, ``amplitude`` is the value at the peak ``center``."""
    amplitude: float
    width: float
    center: float = 0.0

    def _raw(self, nu):
        g2 = self.width ** 2
        return self.amplitude * g2 / (g2 + (nu - self.center) ** 2)

    def omega_bath(self, omega_d: float) -> float:
        return omega_d - self.center


@dataclass(frozen=True)
class ThermalLinear(SpectralModel):
    """Linearized detailed balance around zero frequency, K0 (1 + nu/T)."""
    K0: float
    temperature: float

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def _raw(self, nu):
        return self.K0 * (1.0 + nu / self.temperature)


@dataclass(frozen=True)
class Tabulated(SpectralModel):
    nu: tuple
    K: tuple

    def __post_init__(self):
        nu = np.asarray(self.nu, dtype=float)
        K = np.asarray(self.K, dtype=float)
        if nu.ndim != 1 or nu.shape != K.shape or nu.size < 2:
            raise ValueError("tabulated model needs matching 1d arrays with >= 2 samples")
        if np.any(np.diff(nu) <= 0):
            raise ValueError("tabulated frequencies must be strictly increasing")
        object.__setattr__(self, "nu", tuple(nu))
        object.__setattr__(self, "K", tuple(K))

    @classmethod
    def from_samples(cls, samples: Sequence[tuple[float, float]]) -> "Tabulated":
        nu, K = zip(*samples)
        return cls(nu, K)

    def _raw(self, nu):
        lo, hi = self.nu[0], self.nu[-1]
        if nu < lo or nu > hi:
            raise SpectralRangeError(f"nu={nu} outside tabulated range [{lo}, {hi}]")
        return np.interp(nu, self.nu, self.K)


@dataclass(frozen=True)
class Composite(SpectralModel):
    components: tuple = ()

    def _raw(self, nu):
        return sum(c._raw(nu) for c in self.components)


def eval_K(model: SpectralModel, nu: float) -> float:
    """K(nu) >= 0; a negative raw value is clamped and a warning is issued."""
    k, clamped = model.evaluate(nu)
    if clamped:
        warnings.warn(f"K({nu}) negative for {model!r}; clamped to 0",
                      NegativeSpectralWarning, stacklevel=2)
    return k


@dataclass(frozen=True)
class CouplingParams:
    """Weights of sigma_x, sigma_y, sigma_z in the system-bath coupling."""
    ax: float = 0.0
    ay: float = 0.0
    az: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.ax, self.ay, self.az])):
            raise ValueError("coupling amplitudes must be finite")

    @property
    def transverse(self) -> float:
        return self.ax ** 2 + self.ay ** 2

    @property
    def longitudinal(self) -> float:
        return self.az ** 2


@dataclass(frozen=True)
class LabRates:
    gamma_down: float
    gamma_up: float = 0.0
    gamma_0: float = 0.0

    def __post_init__(self):
        if min(self.gamma_down, self.gamma_up, self.gamma_0) < 0:
            raise ValueError(f"lab rates must be non-negative: {self}")

    @property
    def gamma_tilde(self) -> float:
        return 0.5 * (self.gamma_down + self.gamma_up) + 2.0 * self.gamma_0

    @property
    def T1(self) -> float:
        return 1.0 / (self.gamma_down + self.gamma_up)

    @property
    def T2(self) -> float:
        return 1.0 / self.gamma_tilde

    @property
    def T2_star(self) -> float:
        return 1.0 / (2.0 * self.gamma_0)


@dataclass(frozen=True)
class RateSet:
    """Rates and first/second order asymmetries used by the driven generators.

    ``down``/``up`` are transverse rates at -+omega_d, ``z0``, ``z_plus``,
    ``z_minus`` the longitudinal ones at 0 and +-omega, ``eps``/``eps_e`` the
    slopes of K around +-omega_d and ``upsilon`` its curvature around omega_d.
    """
    down: float
    up: float = 0.0
    z0: float = 0.0
    z_plus: float = 0.0
    z_minus: float = 0.0
    eps: float = 0.0
    eps_e: float = 0.0
    upsilon: float = 0.0

    def __post_init__(self):
        rates = (self.down, self.up, self.z0, self.z_plus, self.z_minus)
        if not all(np.isfinite(rates + (self.eps, self.eps_e, self.upsilon))):
            raise ValueError("rates must be finite")
        if min(rates) < 0:
            raise ValueError(f"rates must be non-negative: {self}")
        tol = 1e-12
        if self.down * (1 - abs(self.eps)) < -tol * max(self.down, 1.0):
            raise ValueError(f"down*(1 +- eps) negative for eps={self.eps}")
        if self.up * (1 - abs(self.eps_e)) < -tol * max(self.up, 1.0):
            raise ValueError(f"up*(1 +- eps_e) negative for eps_e={self.eps_e}")

    @property
    def upsilon_flagged(self) -> bool:
        """Negative curvature: allowed, but atypical for a bath peaked near omega_d."""
        return self.upsilon < 0

    def lab(self) -> LabRates:
        """The rates a drive-independent (Bloch) treatment would use."""
        return LabRates(self.down, self.up, self.z0)

    def scaled(self, factor: float) -> "RateSet":
        return replace(self, down=factor * self.down, up=factor * self.up,
                       z0=factor * self.z0, z_plus=factor * self.z_plus,
                       z_minus=factor * self.z_minus)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("down", "up", "z0", "z_plus", "z_minus", "eps", "eps_e", "upsilon")}


def lab_rates(model: SpectralModel, coupling: CouplingParams, omega0: float) -> LabRates:
    if omega0 <= 0:
        raise ValueError("qubit frequency must be positive")
    a2, z2 = coupling.transverse, coupling.longitudinal
    down = a2 * eval_K(model, omega0) if a2 > 0 else 0.0
    up = a2 * eval_K(model, -omega0) if a2 > 0 else 0.0
    return LabRates(down, up, z2 * eval_K(model, 0.0) if z2 > 0 else 0.0)


def _asym(model, center, omega, second_order):
    k0 = eval_K(model, center)
    kp, km = eval_K(model, center + omega), eval_K(model, center - omega)
    if k0 <= 0:
        return 0.0, 0.0
    eps = (kp - km) / (2 * k0)
    ups = (kp + km - 2 * k0) / (2 * k0) if second_order else 0.0
    return eps, ups


def generalized_rates(model: SpectralModel, coupling: CouplingParams, drive,
                      order: int = 1) -> RateSet:
    """Rates for the generalized generator, asymmetries by symmetric differences of K."""
    from .generators import DegenerateDriveError

    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    w, wd = drive.omega, drive.omega_d
    if w <= 0:
        raise DegenerateDriveError("generalized rates need a nonzero dressed splitting")
    a2, z2 = coupling.transverse, coupling.longitudinal
    # a channel with zero coupling never evaluates K, so it cannot trip range checks
    down = up = eps = eps_e = ups = z0 = zp = zm = 0.0
    if a2 > 0:
        down, up = a2 * eval_K(model, wd), a2 * eval_K(model, -wd)
        eps, ups = _asym(model, wd, w, order == 2)
        eps_e, _ = _asym(model, -wd, w, False)
    if z2 > 0:
        z0, zp, zm = (z2 * eval_K(model, nu) for nu in (0.0, w, -w))
    return RateSet(down, up, z0, zp, zm, eps, eps_e, ups)


def model_from_config(components: Sequence[dict]) -> SpectralModel:
    """Build a (possibly composite) model from ``[{kind: ..., **params}, ...]``."""
    kinds = {
        "flat": lambda p: Flat(float(p["K0"])),
        "lorentzian": lambda p: LorentzianCavity(float(p["amplitude"]), float(p["width"]),
                                                 float(p.get("center", 0.0))),
        "thermal": lambda p: ThermalLinear(float(p["K0"]), float(p["T"])),
        "tabulated": lambda p: Tabulated(p["nu"], p["K"]),
    }
    parts = []
    for i, comp in enumerate(components):
        kind = comp.get("kind")
        if kind not in kinds:
            raise ValueError(f"bath component {i}: unknown kind {kind!r}")
        try:
            parts.append(kinds[kind](comp))
        except KeyError as exc:
            raise ValueError(f"bath component {i} ({kind}): missing {exc.args[0]!r}") from None
    if not parts:
        raise ValueError("bath needs at least one component")
    return parts[0] if len(parts) == 1 else Composite(tuple(parts))
