# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of _kernels_py.thermal_eval.

Same panel scheme, same weights, same stable trig forms; only the
time-frequency-weightset triple loop is lowered to C.  Results agree with
the pure-numpy evaluator up to floating-point summation order.
"""

import numpy as np

from libc.math cimport cos, fabs, sin


def thermal_eval(
    double[::1] omega,
    double[:, ::1] wk,
    double[:, ::1] wdiff,
    double[::1] ts,
):
    cdef Py_ssize_t n = omega.shape[0]
    cdef Py_ssize_t n_sets = wk.shape[1]
    cdef Py_ssize_t n_panels = n // 15
    cdef Py_ssize_t m = ts.shape[0]

    decay_arr = np.zeros((n_sets, m))
    rate_arr = np.zeros((n_sets, m))
    err_d_arr = np.zeros((n_sets, m))
    err_r_arr = np.zeros((n_sets, m))
    pd_arr = np.zeros(n_sets)
    pr_arr = np.zeros(n_sets)
    cdef double[:, ::1] decay = decay_arr
    cdef double[:, ::1] rate = rate_arr
    cdef double[:, ::1] err_d = err_d_arr
    cdef double[:, ::1] err_r = err_r_arr
    cdef double[::1] pd = pd_arr
    cdef double[::1] pr = pr_arr

    cdef Py_ssize_t k, p, i, j, s
    cdef double t, x, sh, ch, d, r

    with nogil:
        for k in range(m):
            t = ts[k]
            i = 0
            for p in range(n_panels):
                for s in range(n_sets):
                    pd[s] = 0.0
                    pr[s] = 0.0
                for j in range(15):
                    x = omega[i]
                    sh = sin(0.5 * x * t)
                    ch = cos(0.5 * x * t)
                    d = 2.0 * sh * sh
                    r = 2.0 * sh * ch * x
                    for s in range(n_sets):
                        decay[s, k] += wk[i, s] * d
                        rate[s, k] += wk[i, s] * r
                        pd[s] += wdiff[i, s] * d
                        pr[s] += wdiff[i, s] * r
                    i += 1
                for s in range(n_sets):
                    err_d[s, k] += fabs(pd[s])
                    err_r[s, k] += fabs(pr[s])

    return decay_arr, rate_arr, err_d_arr, err_r_arr
