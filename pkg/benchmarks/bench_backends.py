#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-numpy batch kernels.

The workloads mirror the production sweeps: a single-Ohmicity time grid
(figure 1 style), a many-Ohmicity shared grid (the interplay surface),
and a long sign-scan grid (the backflow measure).  Both backends receive
identical precomputed weights, so the numbers isolate the
time-frequency evaluation loop.

Usage: python benchmarks/bench_backends.py
"""

import time

import numpy as np

from qsl_dephasing import _kernels_py
from qsl_dephasing._thermal import _prepare_grid

try:
    from qsl_dephasing import _kernels_cy
except ImportError:
    _kernels_cy = None

CASES = [
    ("single s, 400 t (fig 1 cell)", (1.7,), 10.0, 400),
    ("single s, 2048 t (rate scan)", (4.0,), 50.0, 2048),
    ("80 s shared, 1025 t (interplay)", tuple(np.linspace(0.1, 8.0, 80)), 10.0, 1025),
]


def run(kernel, omega, wk, wdiff, ts, repeats=3):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        kernel(omega, wk, wdiff, ts)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    print(f"{'workload':<36} {'nodes':>7} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for label, s_values, t_max, n_t in CASES:
        omega, wk, wdiff, _, _ = _prepare_grid(s_values, 1.0, 1.5, t_max, 0, 13_000)
        ts = np.linspace(0.0, t_max, n_t)
        t_py = run(_kernels_py.thermal_eval, omega, wk, wdiff, ts)
        if _kernels_cy is None:
            print(f"{label:<36} {omega.size:>7} {t_py * 1e3:>8.1f}ms {'n/a':>10} {'':>8}")
            continue
        t_cy = run(_kernels_cy.thermal_eval, omega, wk, wdiff, ts)
        print(
            f"{label:<36} {omega.size:>7} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms "
            f"{t_py / t_cy:>7.2f}x"
        )
    if _kernels_cy is None:
        print("\ncompiled backend not built; install with Cython to compare")


if __name__ == "__main__":
    main()
