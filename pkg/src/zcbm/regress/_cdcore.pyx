# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cyclic coordinate-descent sweeps for the l1/l2 objective

    ||y - F w||^2 + l1 ||w||_1 + l2 ||w||^2

`cols` holds the design columns F_j as contiguous rows; the residual
r = y - F w is maintained incrementally across updates.
"""

from libc.math cimport fabs


def cd_sweeps(double[:, ::1] cols, double[::1] colsq, double[::1] w,
              double[::1] r, double l1, double l2, double tol,
              int max_sweeps):
    """Run up to max_sweeps full sweeps; stop early once the largest
    coordinate change in a sweep falls below tol.

    Returns (sweeps_done, last_max_delta).
    """
    cdef Py_ssize_t K = cols.shape[0]
    cdef Py_ssize_t d = cols.shape[1]
    cdef Py_ssize_t j, i
    cdef int sweep
    cdef double g, z, denom, wj_new, delta, max_delta
    cdef double last_delta = 0.0

    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in range(K):
            if colsq[j] <= 1e-24:
                continue
            g = 0.0
            for i in range(d):
                g += cols[j, i] * r[i]
            z = 2.0 * (g + colsq[j] * w[j])
            if z > l1:
                wj_new = (z - l1) / (2.0 * colsq[j] + 2.0 * l2)
            elif z < -l1:
                wj_new = (z + l1) / (2.0 * colsq[j] + 2.0 * l2)
            else:
                wj_new = 0.0
            delta = wj_new - w[j]
            if delta != 0.0:
                for i in range(d):
                    r[i] -= delta * cols[j, i]
                w[j] = wj_new
                if fabs(delta) > max_delta:
                    max_delta = fabs(delta)
        last_delta = max_delta
        if max_delta < tol:
            return sweep + 1, last_delta
    return max_sweeps, last_delta
