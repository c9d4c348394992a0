"""Bath spectral density, thermal kernel, and the composite dephasing model.

Unit convention: hbar = k_B = 1 and every frequency-like quantity
(temperature, thermal frequency, qubit splitting) shares the unit of the
cutoff omega_c; times carry the inverse unit.  omega_c defaults to 1.0 so
numbers read directly in cutoff units.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Coupling",
    "Regime",
    "OhmicSpectralDensity",
    "ThermalEnvironment",
    "DephasingModel",
    "spectral_density",
    "classify_coupling",
    "thermal_kernel",
]

# Below this value of omega/(2T) the coth is evaluated by its Laurent
# series 2T/omega + omega/(6T); the two-term truncation error there is
# below 1e-17 relative.
_COTH_SERIES_THRESHOLD = 1e-4


class Coupling(enum.Enum):
    SUB_OHMIC = "sub_ohmic"
    OHMIC = "ohmic"
    SUPER_OHMIC = "super_ohmic"


class Regime(enum.Enum):
    ZERO = "zero"
    FINITE = "finite"
    HIGH_T_LIMIT = "high_t_limit"


@dataclass(frozen=True)
class OhmicSpectralDensity:
    """Ohmic-like spectrum omega**s / omega_c**(s-1) * exp(-omega/omega_c)."""

    s: float
    omega_c: float = 1.0

    def __post_init__(self):
        if not self.s > 0.0:
            raise ValueError("Ohmicity s must be positive")
        if not self.omega_c > 0.0:
            raise ValueError("cutoff omega_c must be positive")


@dataclass(frozen=True)
class ThermalEnvironment:
    """Temperature regime of the bath: zero, finite T, or the high-T limit."""

    regime: Regime
    temperature: float = 0.0
    omega_t: float = 0.0

    def __post_init__(self):
        if self.regime is Regime.ZERO and self.temperature != 0.0:
            raise ValueError("zero regime forces T = 0")
        if self.regime is Regime.FINITE and not self.temperature > 0.0:
            raise ValueError("finite regime requires T > 0")
        if self.regime is Regime.HIGH_T_LIMIT and not self.omega_t > 0.0:
            raise ValueError("high-T limit requires omega_t > 0")

    @classmethod
    def zero(cls) -> "ThermalEnvironment":
        return cls(Regime.ZERO)

    @classmethod
    def finite(cls, temperature: float) -> "ThermalEnvironment":
        return cls(Regime.FINITE, temperature=temperature)

    @classmethod
    def high_t(cls, omega_t: float) -> "ThermalEnvironment":
        return cls(Regime.HIGH_T_LIMIT, omega_t=omega_t)


@dataclass(frozen=True)
class DephasingModel:
    """Everything the dynamics operations need: bath, temperature, qubit."""

    spectral: OhmicSpectralDensity
    environment: ThermalEnvironment
    omega_0: float = 1.0

    def __post_init__(self):
        if self.omega_0 < 0.0:
            raise ValueError("transition frequency omega_0 must be >= 0")


def spectral_density(sd: OhmicSpectralDensity, omega):
    """Spectral weight J(omega); accepts scalars or arrays, omega >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise ValueError("spectral_density requires omega >= 0")
    j = omega**sd.s * np.exp(-omega / sd.omega_c) / sd.omega_c ** (sd.s - 1.0)
    return j if j.shape else float(j)


def classify_coupling(s: float) -> Coupling:
    """Sub-Ohmic for s<1, Ohmic at s=1 (within 1e-12), super-Ohmic for s>1."""
    if not s > 0.0:
        raise ValueError("Ohmicity s must be positive")
    if abs(s - 1.0) <= 1e-12:
        return Coupling.OHMIC
    return Coupling.SUB_OHMIC if s < 1.0 else Coupling.SUPER_OHMIC


def thermal_kernel(omega, env: ThermalEnvironment):
    """Temperature weight of the bath integrals; accepts scalars or arrays.

    zero regime -> 1, finite T -> coth(omega/2T) with a series guard near
    omega = 0, high-T limit -> 2*omega_t/omega.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise ValueError("thermal_kernel requires omega > 0")
    if env.regime is Regime.ZERO:
        out = np.ones_like(omega)
    elif env.regime is Regime.HIGH_T_LIMIT:
        out = 2.0 * env.omega_t / omega
    else:
        x = omega / (2.0 * env.temperature)
        small = x < _COTH_SERIES_THRESHOLD
        out = np.empty_like(x)
        out[small] = 1.0 / x[small] + x[small] / 3.0
        out[~small] = 1.0 / np.tanh(x[~small])
    return out if out.shape else float(out)
