"""Gauss-Kronrod and Gauss-Jacobi building blocks for the panel quadratures.

The 15-point Kronrod rule embeds the 7-point Gauss rule, so one set of
integrand samples yields both the value (Kronrod) and an error estimate
(|Kronrod - Gauss|).  Panel layouts grow geometrically away from the left
endpoint (to grade power-law behaviour) and are capped in width so that an
oscillation cos(omega*t) is always sampled at least twice per period.
"""

from __future__ import annotations

import numpy as np
from scipy.special import roots_jacobi

# QUADPACK dqk15 abscissae/weights on [-1, 1]; positive half, descending.
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node rule in ascending order.
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights aligned with GK_NODES: nonzero only at the embedded G7 nodes
# (every second node, indices 1, 3, ..., 13).
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])

GK_POINTS_PER_PANEL = 15


def panel_nodes_weights(edges: np.ndarray):
    """Map the GK15 rule onto every panel defined by ``edges``.

    Returns (omega, w_kronrod, w_diff) flat arrays of length 15*(n_panels),
    where w_diff = (kronrod - gauss) weights, both already scaled by the
    panel half-widths.
    """
    left = edges[:-1]
    half = 0.5 * np.diff(edges)
    mid = left + half
    omega = (mid[:, None] + half[:, None] * GK_NODES[None, :]).ravel()
    w_k = (half[:, None] * GK_WEIGHTS[None, :]).ravel()
    w_d = (half[:, None] * (GK_WEIGHTS - G_WEIGHTS)[None, :]).ravel()
    return omega, w_k, w_d


def body_edges(a_lo: float, a_hi: float, cap: float, max_panels: int) -> np.ndarray:
    """Panel edges on [a_lo, a_hi]: geometric doubling capped at ``cap``.

    ``a_lo`` must be > 0 (the quadrature never samples the endpoint 0).
    If the cap would require more than ``max_panels`` panels it is widened
    to fit; callers must then treat the result as unconverged.
    """
    if not a_lo > 0.0:
        raise ValueError("a_lo must be positive")
    span = a_hi - a_lo
    if np.isfinite(cap) and span / cap > max_panels:
        cap = span / max_panels
    edges = [a_lo]
    x = a_lo
    while x < a_hi:
        x = min(x + min(x, cap), a_hi)
        edges.append(x)
        if len(edges) > max_panels + 64:
            break
    edges[-1] = a_hi
    return np.asarray(edges)


def ladder_edges(a_hi: float, cap: float, depth: int = 48) -> np.ndarray:
    """Edges on [0, a_hi] with a 2x geometric ladder toward 0, cap-limited.

    The innermost panel is [0, a_hi * 2**-depth]; no node falls on 0 because
    the GK rule is open.
    """
    edges = [0.0] + [a_hi * 2.0 ** (-k) for k in range(depth, -1, -1)]
    if not np.isfinite(cap):
        return np.asarray(edges)
    out = [0.0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = max(1, int(np.ceil((hi - lo) / cap)))
        out.extend(np.linspace(lo, hi, n + 1)[1:])
    return np.asarray(out)


def bisect_edges(edges: np.ndarray) -> np.ndarray:
    """Insert the midpoint of every panel (one global refinement round)."""
    mids = 0.5 * (edges[:-1] + edges[1:])
    return np.sort(np.concatenate([edges, mids]))


def jacobi_head(a: float, power: float, n: int):
    """Nodes/weights for int_0^a omega**power * f(omega) d(omega), power > -1.

    Returns (omega_j, w_j) such that the integral is sum(w_j * f(omega_j)).
    """
    x, w = roots_jacobi(n, 0.0, power)
    omega = 0.5 * a * (1.0 + x)
    scale = (0.5 * a) ** (power + 1.0)
    return omega, scale * w
