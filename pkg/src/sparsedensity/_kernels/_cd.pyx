# Cython implementation of the coordinate-descent sweep.  Semantics must
# match sparsedensity._kernels._py.cd_sweeps exactly.

from libc.math cimport fabs

import numpy as np


def cd_sweeps(double[:, ::1] G, double[::1] beta, double[::1] eta,
              double[::1] lam, double[::1] q, long max_sweeps,
              double tol_change):
    cdef Py_ssize_t M = lam.shape[0]
    cdef Py_ssize_t m, j
    cdef long sweeps = 0
    cdef double max_change = 1e300
    cdef double g_mm, z, new, delta

    while sweeps < max_sweeps and max_change > tol_change:
        max_change = 0.0
        for m in range(M):
            g_mm = G[m, m]
            z = beta[m] - (q[m] - g_mm * lam[m])
            if z > eta[m]:
                new = (z - eta[m]) / g_mm
            elif z < -eta[m]:
                new = (z + eta[m]) / g_mm
            else:
                new = 0.0
            delta = new - lam[m]
            if delta != 0.0:
                for j in range(M):
                    q[j] += G[m, j] * delta
                lam[m] = new
                if fabs(delta) > max_change:
                    max_change = fabs(delta)
        sweeps += 1
    return sweeps, max_change
