"""Finite-temperature bath integrals, batched over time grids.

The integrands J(omega) * coth(omega/2T) * {(1-cos(omega t))/omega^2,
sin(omega t)/omega} factor as omega**(s-1) times a function analytic on a
strip around the real axis.  The singular head [0, a] is handled by a
Gauss-Jacobi rule with weight omega**(s-1) (exact for the analytic part),
the body [a, omega_max] by geometrically graded Gauss-Kronrod panels whose
width never exceeds half an oscillation period.  Panels are globally
bisected until the embedded error estimate meets the tolerance for every
requested time or the evaluation budget runs out.

Many Ohmicity values can share one body grid: the trig factors depend
only on (omega, t), so a sweep over s rides along as extra weight columns
in the backend call.  The Jacobi heads have s-dependent nodes and are
summed here directly (they hold a few dozen points each).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _gauss, backend
from .model import (
    OhmicSpectralDensity,
    Regime,
    ThermalEnvironment,
    spectral_density,
    thermal_kernel,
)
from .numerics import DEFAULT_TOLERANCE, QuadratureResult, Tolerance

_HEAD_N = 24
_HEAD_N_CHECK = 16
_MAX_ROUNDS = 4
_GRID_CACHE: dict[tuple, tuple] = {}
_GRID_CACHE_MAX = 64


@dataclass(frozen=True)
class ThermalBatch:
    """Decay function and dephasing rate on a shared time grid.

    Arrays are (n_s, n_t); ``converged`` is the joint flag for the pair.
    """

    ts: np.ndarray
    decay: np.ndarray
    rate: np.ndarray
    decay_error: np.ndarray
    rate_error: np.ndarray
    evaluations: int
    converged: np.ndarray


def _head_split(omega_c: float, temperature: float, t_ref: float) -> float:
    # The head rule needs the smooth factor analytic on [0, a]: stay inside
    # the coth pole at 2*pi*T and keep at most a quarter oscillation.
    a = 0.5 * omega_c
    a = min(a, np.pi * temperature)
    if t_ref > 0.0:
        a = min(a, 0.5 * np.pi / t_ref)
    return a


def _omega_max(s_max: float, omega_c: float) -> float:
    # Large-s spectra push weight to high frequencies: grow the cutoff until
    # omega**(s-1) exp(-omega) drops below ~1e-13, else the discarded
    # oscillatory tail aliases into small-rate values at late times.
    x = max(40.0, s_max + 10.0 * np.log(10.0))
    for _ in range(4):
        x = max(x, 30.0 + (s_max - 1.0) * np.log(x))
    return omega_c * x


def _smooth_weight(sd: OhmicSpectralDensity, env: ThermalEnvironment, omega: np.ndarray):
    # J(omega) * coth(omega/2T) / omega^2, finite for omega > 0.
    return spectral_density(sd, omega) * thermal_kernel(omega, env) / omega**2


def _head_weights(sd: OhmicSpectralDensity, env: ThermalEnvironment, a: float, n: int):
    x, w = _gauss.jacobi_head(a, sd.s - 1.0, n)
    return x, w * _smooth_weight(sd, env, x) * x ** (1.0 - sd.s)


def _head_sums(sd, env, a: float, ts: np.ndarray):
    """Head contributions to (decay, rate) per t, with a 24-vs-16 node error."""
    out = []
    for n in (_HEAD_N, _HEAD_N_CHECK):
        x, w = _head_weights(sd, env, a, n)
        half_ot = 0.5 * x[:, None] * ts[None, :]
        sh = np.sin(half_ot)
        ch = np.cos(half_ot)
        out.append((w @ (2.0 * sh * sh), (w * x) @ (2.0 * sh * ch)))
    (d24, r24), (d16, r16) = out
    return d24, r24, np.abs(d24 - d16), np.abs(r24 - r16)


def _prepare_grid(
    s_values: tuple[float, ...],
    omega_c: float,
    temperature: float,
    t_ref: float,
    level: int,
    max_panels: int,
):
    """Shared body grid and per-s weight columns for one refinement level."""
    key = (s_values, omega_c, temperature, t_ref, level, max_panels)
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit

    env = ThermalEnvironment.finite(temperature)
    a = _head_split(omega_c, temperature, t_ref)
    cap = np.pi / t_ref if t_ref > 0.0 else np.inf
    edges = _gauss.body_edges(a, _omega_max(max(s_values), omega_c), cap, max_panels)
    cap_met = bool((np.diff(edges) <= cap * (1.0 + 1e-12)).all()) if np.isfinite(cap) else True
    for _ in range(level):
        edges = _gauss.bisect_edges(edges)

    omega, wk1, wd1 = _gauss.panel_nodes_weights(edges)
    wk = np.empty((omega.size, len(s_values)))
    wdiff = np.empty((omega.size, len(s_values)))
    for j, s in enumerate(s_values):
        smooth = _smooth_weight(OhmicSpectralDensity(s, omega_c), env, omega)
        wk[:, j] = wk1 * smooth
        wdiff[:, j] = wd1 * smooth

    value = (
        np.ascontiguousarray(omega),
        np.ascontiguousarray(wk),
        np.ascontiguousarray(wdiff),
        a,
        cap_met,
    )
    if len(_GRID_CACHE) >= _GRID_CACHE_MAX:
        _GRID_CACHE.pop(next(iter(_GRID_CACHE)))
    _GRID_CACHE[key] = value
    return value


def decay_rate_batch_multi(
    s_values,
    omega_c: float,
    env: ThermalEnvironment,
    ts: np.ndarray,
    tol: Tolerance | None = None,
    t_ref: float | None = None,
) -> ThermalBatch:
    """D(t) and gamma(t) for every (s, t) pair at finite temperature.

    ``t_ref`` (default max(ts)) sets the oscillation cap; callers that
    issue many small calls may round it up to a fixed value so the cached
    grid is reused.
    """
    if env.regime is not Regime.FINITE:
        raise ValueError("decay_rate_batch_multi requires a finite-temperature environment")
    tol = tol or DEFAULT_TOLERANCE
    s_values = tuple(float(s) for s in s_values)
    ts = np.ascontiguousarray(ts, dtype=float)
    n_s = len(s_values)
    if ts.size == 0 or n_s == 0:
        empty = np.empty((n_s, ts.size))
        return ThermalBatch(ts, empty, empty, empty, empty, 0, np.empty((n_s, ts.size), dtype=bool))
    if np.any(ts < 0.0):
        raise ValueError("times must be nonnegative")

    if t_ref is None:
        t_ref = float(ts.max())
    max_panels = max(tol.max_evals // _gauss.GK_POINTS_PER_PANEL, 8)

    # Heads are refinement-independent; compute them once per s.  The
    # truncated high-frequency tail enters the error budget analytically:
    # |integral beyond omega_max| <= 2 * W(omega_max) * omega_c for the
    # decay weight and likewise for the rate weight.
    a = _head_split(omega_c, env.temperature, t_ref)
    omega_hi = _omega_max(max(s_values), omega_c)
    head_d = np.empty((n_s, ts.size))
    head_r = np.empty((n_s, ts.size))
    head_ed = np.empty((n_s, ts.size))
    head_er = np.empty((n_s, ts.size))
    tail_d = np.empty((n_s, 1))
    tail_r = np.empty((n_s, 1))
    for j, s in enumerate(s_values):
        sd = OhmicSpectralDensity(s, omega_c)
        head_d[j], head_r[j], head_ed[j], head_er[j] = _head_sums(sd, env, a, ts)
        w_end = float(_smooth_weight(sd, env, np.array([omega_hi]))[0])
        tail_d[j, 0] = 4.0 * w_end * omega_c
        tail_r[j, 0] = 4.0 * w_end * omega_hi * omega_c
    evaluations = n_s * (_HEAD_N + _HEAD_N_CHECK)

    best = None
    for level in range(_MAX_ROUNDS + 1):
        omega, wk, wdiff, _, cap_met = _prepare_grid(
            s_values, omega_c, env.temperature, t_ref, level, max_panels
        )
        if evaluations + omega.size > tol.max_evals:
            break
        decay, rate, err_d, err_r = backend.thermal_eval(omega, wk, wdiff, ts)
        evaluations += omega.size
        decay = decay + head_d
        rate = rate + head_r
        err_d = err_d + head_ed + tail_d
        err_r = err_r + head_er + tail_r
        ok = (err_d <= np.maximum(tol.abs_tol, tol.rel_tol * np.abs(decay))) & (
            err_r <= np.maximum(tol.abs_tol, tol.rel_tol * np.abs(rate))
        )
        if not cap_met:
            ok &= False
        best = (decay, rate, err_d, err_r, ok)
        if ok.all():
            break

    if best is None:
        nan = np.full((n_s, ts.size), np.nan)
        return ThermalBatch(ts, nan, nan, nan, nan, evaluations, np.zeros((n_s, ts.size), dtype=bool))
    decay, rate, err_d, err_r, ok = best
    return ThermalBatch(ts, decay, rate, err_d, err_r, evaluations, ok)


def decay_rate_batch(
    sd: OhmicSpectralDensity,
    env: ThermalEnvironment,
    ts: np.ndarray,
    tol: Tolerance | None = None,
    t_ref: float | None = None,
) -> ThermalBatch:
    """Single-Ohmicity convenience wrapper; arrays come back squeezed to 1-D."""
    batch = decay_rate_batch_multi([sd.s], sd.omega_c, env, ts, tol, t_ref)
    return ThermalBatch(
        ts=batch.ts,
        decay=batch.decay[0],
        rate=batch.rate[0],
        decay_error=batch.decay_error[0],
        rate_error=batch.rate_error[0],
        evaluations=batch.evaluations,
        converged=batch.converged[0],
    )


def steady_integral(
    sd: OhmicSpectralDensity,
    env: ThermalEnvironment,
    tol: Tolerance | None = None,
) -> QuadratureResult:
    """Non-oscillatory integral of J(omega)*coth(omega/2T)/omega^2; s > 2 only."""
    if env.regime is not Regime.FINITE:
        raise ValueError("steady_integral requires a finite-temperature environment")
    if not sd.s > 2.0:
        raise ValueError("the steady decay integral diverges for s <= 2")
    tol = tol or DEFAULT_TOLERANCE

    a = _head_split(sd.omega_c, env.temperature, 0.0)
    max_panels = max(tol.max_evals // _gauss.GK_POINTS_PER_PANEL, 8)

    def head_value(n: int) -> float:
        x, w = _gauss.jacobi_head(a, sd.s - 3.0, n)
        return float(np.sum(w * _smooth_weight(sd, env, x) * x ** (3.0 - sd.s)))

    head = head_value(_HEAD_N)
    head_err = abs(head - head_value(_HEAD_N_CHECK))
    evaluations = _HEAD_N + _HEAD_N_CHECK

    edges = _gauss.body_edges(a, _omega_max(sd.s, sd.omega_c), np.inf, max_panels)
    value, err = np.nan, np.inf
    for _ in range(_MAX_ROUNDS + 1):
        omega, wk, wdiff = _gauss.panel_nodes_weights(edges)
        if evaluations + omega.size > tol.max_evals:
            break
        smooth = _smooth_weight(sd, env, omega)
        value = head + float(wk @ smooth)
        panel_diffs = (wdiff * smooth).reshape(-1, 15).sum(axis=1)
        err = head_err + float(np.abs(panel_diffs).sum())
        evaluations += omega.size
        if err <= tol.target(value):
            return QuadratureResult(value, err, evaluations, True)
        edges = _gauss.bisect_edges(edges)
    return QuadratureResult(value, err, evaluations, False)
