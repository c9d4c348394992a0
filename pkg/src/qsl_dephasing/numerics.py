"""Reusable numerical kernels.

Gamma function, adaptive semi-infinite panel quadrature, sign-change
scanning with bisection refinement, and a fixed-step RK4 propagator used
as an independent oracle elsewhere in the package.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _gauss

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "QuadratureResult",
    "SignChange",
    "SignDirection",
    "gamma_fn",
    "integrate_semi_infinite",
    "find_sign_changes",
    "integrate_ode",
]


@dataclass(frozen=True)
class Tolerance:
    """Accuracy request for the iterative routines."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_evals: int = 200_000

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise ValueError("abs_tol must be positive")
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if self.max_evals < 100:
            raise ValueError("max_evals must be at least 100")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


class SignDirection(enum.Enum):
    POSITIVE_TO_NEGATIVE = "positive_to_negative"
    NEGATIVE_TO_POSITIVE = "negative_to_positive"


@dataclass(frozen=True)
class SignChange:
    t_root: float
    direction: SignDirection


def gamma_fn(s: float) -> float:
    """Gamma function for positive arguments; exact at positive integers."""
    if not s > 0.0:
        raise ValueError(f"gamma_fn requires s > 0, got {s}")
    return math.gamma(s)


def _eval_integrand(f: Callable, omega: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(omega), dtype=float)
        if values.shape != omega.shape:
            raise ValueError
    except (TypeError, ValueError):
        values = np.fromiter((float(f(w)) for w in omega), dtype=float, count=omega.size)
    if not np.all(np.isfinite(values)):
        bad = omega[~np.isfinite(values)][0]
        raise ValueError(f"integrand returned a non-finite value at omega={bad}")
    return values


def integrate_semi_infinite(
    f: Callable,
    t_scale: float | None = None,
    tol: Tolerance | None = None,
    *,
    tail_scale: float = 1.0,
    tail_power: float = 0.0,
    omega_max: float | None = None,
) -> QuadratureResult:
    """Adaptive panel quadrature of ``f`` over (0, infinity).

    ``f`` must decay exponentially with rate >= 1/tail_scale; the domain is
    truncated at omega_max = tail_scale * max(40, tail_power + 10*ln(10)) so
    the discarded tail sits far below the integral scale.  When ``t_scale``
    is given the integrand is assumed to oscillate like cos(omega*t_scale)
    and panel widths never exceed half a period, pi/t_scale.  The endpoint
    omega = 0 is never sampled (open rule); panels are refined worst-first
    by bisection until the error estimate meets ``tol`` or the evaluation
    budget runs out, in which case ``converged`` is False.
    """
    tol = tol or DEFAULT_TOLERANCE
    if omega_max is None:
        omega_max = tail_scale * max(40.0, tail_power + 10.0 * math.log(10.0))
    cap = math.pi / t_scale if t_scale else math.inf

    edges = _gauss.ladder_edges(omega_max, cap)
    max_panels = tol.max_evals // _gauss.GK_POINTS_PER_PANEL
    if len(edges) - 1 > max_panels:
        edges = _gauss.ladder_edges(omega_max, (omega_max / max_panels) * 1.05)

    # Per-panel Kronrod values and |K - G| error estimates.
    lefts = list(edges[:-1])
    rights = list(edges[1:])
    values: list[float] = []
    errors: list[float] = []
    evaluations = 0

    def _do_panel(lo: float, hi: float) -> tuple[float, float]:
        half = 0.5 * (hi - lo)
        omega = (lo + half) + half * _gauss.GK_NODES
        samples = _eval_integrand(f, omega)
        k = half * float(_gauss.GK_WEIGHTS @ samples)
        g = half * float((_gauss.GK_WEIGHTS - _gauss.G_WEIGHTS) @ samples)
        return k, abs(g)

    for lo, hi in zip(lefts, rights):
        k, e = _do_panel(lo, hi)
        values.append(k)
        errors.append(e)
        evaluations += _gauss.GK_POINTS_PER_PANEL

    while True:
        total = float(np.sum(values))
        err = float(np.sum(errors))
        if err <= tol.target(total):
            return QuadratureResult(total, err, evaluations, True)
        if evaluations + 2 * _gauss.GK_POINTS_PER_PANEL > tol.max_evals:
            return QuadratureResult(total, err, evaluations, False)
        worst = int(np.argmax(errors))
        lo, hi = lefts[worst], rights[worst]
        mid = 0.5 * (lo + hi)
        k1, e1 = _do_panel(lo, mid)
        k2, e2 = _do_panel(mid, hi)
        evaluations += 2 * _gauss.GK_POINTS_PER_PANEL
        lefts[worst : worst + 1] = [lo, mid]
        rights[worst : worst + 1] = [mid, hi]
        values[worst : worst + 1] = [k1, k2]
        errors[worst : worst + 1] = [e1, e2]


def find_sign_changes(
    g: Callable[[float], float],
    t_lo: float,
    t_hi: float,
    scan_points: int,
    tol: Tolerance | None = None,
) -> list[SignChange]:
    """Locate sign changes of ``g`` on [t_lo, t_hi].

    A uniform scan brackets each crossing, which is then refined by
    bisection to a width <= abs_tol.  Crossings closer together than the
    scan pitch can be missed; an empty list means no crossing was found.
    """
    tol = tol or DEFAULT_TOLERANCE
    if not t_lo < t_hi:
        raise ValueError("t_lo must be below t_hi")
    if scan_points < 2:
        raise ValueError("scan_points must be at least 2")

    ts = np.linspace(t_lo, t_hi, scan_points)
    gs = np.array([float(g(t)) for t in ts])
    changes: list[SignChange] = []
    for i in range(len(ts) - 1):
        a, b = ts[i], ts[i + 1]
        ga, gb = gs[i], gs[i + 1]
        if ga == 0.0:
            # Sample landed on a root; the neighbouring panels decide.
            continue
        if gb == 0.0:
            if i + 2 < len(ts) and gs[i + 2] * ga < 0.0:
                gb = gs[i + 2]
                b = ts[i + 2]
            else:
                continue
        if ga * gb > 0.0:
            continue
        while b - a > tol.abs_tol:
            m = 0.5 * (a + b)
            gm = float(g(m))
            if gm == 0.0:
                a = m - 0.25 * tol.abs_tol
                b = m + 0.25 * tol.abs_tol
                break
            if ga * gm < 0.0:
                b, gb = m, gm
            else:
                a, ga = m, gm
        direction = (
            SignDirection.POSITIVE_TO_NEGATIVE
            if gs[i] > 0.0
            else SignDirection.NEGATIVE_TO_POSITIVE
        )
        changes.append(SignChange(t_root=0.5 * (a + b), direction=direction))
    return changes


def integrate_ode(
    deriv: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[float] | np.ndarray,
    t_span: tuple[float, float],
    steps: int,
) -> np.ndarray:
    """Classical fixed-step 4th-order Runge-Kutta propagation."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    t0, t1 = t_span
    y = np.array(y0, dtype=float)
    h = (t1 - t0) / steps
    for i in range(steps):
        t = t0 + i * h
        k1 = np.asarray(deriv(t, y), dtype=float)
        k2 = np.asarray(deriv(t + 0.5 * h, y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(deriv(t + 0.5 * h, y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(deriv(t + h, y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise ValueError(f"non-finite state at t={t + h}")
    return y
