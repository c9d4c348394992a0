"""Pure-numpy twin of the compiled batch evaluator.

Evaluates the thermal decay/rate body sums for many times and many weight
sets (one per Ohmicity value) on a shared panel grid.  All omega-dependent
weights arrive precomputed; this module only performs the time-frequency
double loop, which is the hot spot of every parameter sweep.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 64


def thermal_eval(
    omega: np.ndarray,
    wk: np.ndarray,
    wdiff: np.ndarray,
    ts: np.ndarray,
):
    """Batched decay/rate sums over the Gauss-Kronrod body panels.

    ``omega`` holds the 15-per-panel Kronrod nodes; ``wk``/``wdiff`` are
    (n_nodes, n_weightsets) arrays folding the Kronrod (and Kronrod-Gauss
    difference) weights with the smooth omega part, one column per
    Ohmicity.  Per time t the decay integrand carries 2*sin^2(omega*t/2)
    (stable form of 1 - cos) and the rate integrand sin(omega*t).
    Returns (decay, rate, err_decay, err_rate), each (n_weightsets, n_t);
    the errors are summed per-panel |Kronrod - Gauss| estimates.
    """
    n_nodes, n_sets = wk.shape
    n_panels = n_nodes // 15
    m = ts.size
    decay = np.empty((n_sets, m))
    rate = np.empty((n_sets, m))
    err_d = np.empty((n_sets, m))
    err_r = np.empty((n_sets, m))

    wk_t = np.ascontiguousarray(wk.T)
    # (panels, sets, 15) for the batched per-panel error contractions.
    wdiff_p = np.ascontiguousarray(wdiff.reshape(n_panels, 15, n_sets).transpose(0, 2, 1))

    for lo in range(0, m, _CHUNK):
        tb = ts[lo : lo + _CHUNK]
        b = tb.size
        half_ot = 0.5 * omega[:, None] * tb[None, :]
        sh = np.sin(half_ot)
        ch = np.cos(half_ot)
        d = 2.0 * sh * sh
        r = (2.0 * sh * ch) * omega[:, None]
        decay[:, lo : lo + b] = wk_t @ d
        rate[:, lo : lo + b] = wk_t @ r
        d3 = d.reshape(n_panels, 15, b)
        r3 = r.reshape(n_panels, 15, b)
        err_d[:, lo : lo + b] = np.abs(np.matmul(wdiff_p, d3)).sum(axis=0)
        err_r[:, lo : lo + b] = np.abs(np.matmul(wdiff_p, r3)).sum(axis=0)

    return decay, rate, err_d, err_r
