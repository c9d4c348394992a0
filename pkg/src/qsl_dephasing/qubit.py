"""Qubit density matrix, trace distance, coherence, and the two evolutions.

The state stores only the excited population p1 and the coherence
rho_10, which makes Hermiticity and unit trace impossible to violate.
``evolve_analytic`` applies the exact dephasing solution; ``evolve_ode``
propagates the master equation with the fixed-step RK4 integrator and
serves as an independent oracle for it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dephasing import dephasing_factor, dephasing_rate
from .model import DephasingModel
from .numerics import Tolerance, integrate_ode

__all__ = [
    "QubitState",
    "evolve_analytic",
    "evolve_ode",
    "trace_distance",
    "l1_coherence",
]

_POSITIVITY_SLACK = 1e-12


@dataclass(frozen=True)
class QubitState:
    """Two-level density matrix as (p1, rho_10); p0 = 1 - p1 implicitly."""

    p1: float
    c: complex

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise ValueError(f"population p1={self.p1} outside [0, 1]")
        if abs(self.c) ** 2 > self.p1 * (1.0 - self.p1) + _POSITIVITY_SLACK:
            raise ValueError("coherence violates positivity |c|^2 <= p1*(1-p1)")

    @classmethod
    def plus(cls) -> "QubitState":
        """The maximally coherent state |+><+|."""
        return cls(p1=0.5, c=0.5)


def evolve_analytic(
    model: DephasingModel, rho0: QubitState, t: float, tol: Tolerance | None = None
) -> QubitState:
    """Exact dephasing evolution: populations frozen, coherence damped and rotated."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if rho0.c == 0:
        return rho0
    phase = cmath.exp(-1j * model.omega_0 * t)
    return QubitState(p1=rho0.p1, c=phase * dephasing_factor(model, t, tol) * rho0.c)


def evolve_ode(
    model: DephasingModel, rho0: QubitState, t: float, steps: int
) -> QubitState:
    """Propagate dc/dt = (-i*omega_0 - gamma(t)) c with RK4; p1 is conserved.

    The rate is sampled on the fly at every stage time (cached per exact
    time, no interpolation), so this path is independent of the closed
    forms used by ``evolve_analytic``.
    """
    if steps < 10:
        raise ValueError("steps must be at least 10")
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0 or rho0.c == 0:
        return rho0

    cache: dict[float, float] = {}

    def gamma_at(time: float) -> float:
        if time not in cache:
            cache[time] = dephasing_rate(model, max(time, 0.0))
        return cache[time]

    omega_0 = model.omega_0

    def deriv(time: float, y: np.ndarray) -> np.ndarray:
        g = gamma_at(time)
        re, im = y
        # (-i*omega_0 - gamma) * (re + i*im)
        return np.array([omega_0 * im - g * re, -omega_0 * re - g * im])

    y = integrate_ode(deriv, [rho0.c.real, rho0.c.imag], (0.0, t), steps)
    return QubitState(p1=rho0.p1, c=complex(y[0], y[1]))


def trace_distance(a: QubitState, b: QubitState) -> float:
    """Half the trace norm of a - b; for qubits sqrt(dp^2 + |dc|^2)."""
    dp = a.p1 - b.p1
    dc = a.c - b.c
    return math.hypot(dp, abs(dc))


def l1_coherence(rho: QubitState) -> float:
    """Coherence in the l1 norm: the summed moduli of the off-diagonals."""
    return 2.0 * abs(rho.c)
