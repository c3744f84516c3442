# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled update kernel; semantics match _kernels_py exactly."""

import numpy as np


def penalized_rank_two_update(double[:, ::1] h, double[::1] s, double[::1] y,
                              double gamma, double omega):
    """H - omega*(s(Hy)^T + (Hy)s^T) + gamma*(1 + omega*y.Hy) ss^T, exactly symmetric."""
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t i, j
    out_arr = np.empty((n, n), dtype=np.float64)
    hy_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] hy = hy_arr
    cdef double yhy = 0.0
    cdef double acc, coef, vij
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += h[i, j] * y[j]
        hy[i] = acc
        yhy += y[i] * acc
    coef = gamma * (1.0 + omega * yhy)
    for i in range(n):
        for j in range(i, n):
            vij = h[i, j] - omega * (s[i] * hy[j] + hy[i] * s[j]) + coef * s[i] * s[j]
            out[i, j] = vij
            out[j, i] = vij
    return out_arr
