# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the kernels in _pykernels.

Same contracts, same midpoint evaluation, same per-cell exact
antiderivatives for piecewise-linear data; see _pykernels for the
derivations.  Loops are written out flat so the O(n^2) sweeps stay in C.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, sqrt, exp, INFINITY

cnp.import_array()

BACKEND = "cython"


def frac_deriv_left_mid(object g_in, double dt, double alpha, double gamma_rec):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef Py_ssize_t n = g.shape[0] - 1
    cdef Py_ssize_t m = g.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, m))
    cdef Py_ssize_t p, k, j
    cdef double r, xa, xb, sl, A, gr, acc
    cdef double half = alpha * pow(0.5 * dt, 1.0 - alpha) / (1.0 - alpha)
    for p in range(n):
        r = (p + 0.5) * dt
        for j in range(m):
            gr = 0.5 * (g[p, j] + g[p + 1, j])
            acc = gr / pow(r, alpha)
            acc += half * (g[p + 1, j] - g[p, j]) / dt
            for k in range(p):
                xa = r - (k + 1) * dt
                xb = r - k * dt
                sl = (g[k + 1, j] - g[k, j]) / dt
                A = gr - g[k + 1, j] - sl * xa
                acc += alpha * (
                    A * (pow(xa, -alpha) - pow(xb, -alpha)) / alpha
                    + sl * (pow(xb, 1.0 - alpha) - pow(xa, 1.0 - alpha)) / (1.0 - alpha)
                )
            out[p, j] = gamma_rec * acc
    return out


def frac_deriv_right_mid(object w_in, double dt, double alpha, double gamma_rec):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0] - 1
    cdef Py_ssize_t m = w.shape[1]
    cdef double T = n * dt
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, m))
    cdef Py_ssize_t p, k, j
    cdef double r, xa, xb, sl, A, wr, acc
    cdef double half = (1.0 - alpha) * pow(0.5 * dt, alpha) / alpha
    for p in range(n):
        r = (p + 0.5) * dt
        for j in range(m):
            wr = 0.5 * (w[p, j] + w[p + 1, j])
            acc = (wr - w[n, j]) / pow(T - r, 1.0 - alpha)
            acc -= half * (w[p + 1, j] - w[p, j]) / dt
            for k in range(p + 1, n):
                xa = k * dt - r
                xb = (k + 1) * dt - r
                sl = (w[k + 1, j] - w[k, j]) / dt
                A = wr - w[k, j] + sl * xa
                acc += (1.0 - alpha) * (
                    A * (pow(xb, alpha - 1.0) - pow(xa, alpha - 1.0)) / (alpha - 1.0)
                    - sl * (pow(xb, alpha) - pow(xa, alpha)) / alpha
                )
            out[p, j] = gamma_rec * acc
    return out


def holder_pair_sup(object u_in, double dt, double beta, double max_gap):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] u = np.ascontiguousarray(u_in, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m = u.shape[1]
    cdef Py_ssize_t gap, j, i
    cdef double best = 0.0, d2, d, q, diff
    for gap in range(1, n):
        if max_gap != INFINITY and gap * dt >= max_gap:
            break
        d2 = 0.0
        for j in range(n - gap):
            d = 0.0
            for i in range(m):
                diff = u[j + gap, i] - u[j, i]
                d += diff * diff
            if d > d2:
                d2 = d
        q = sqrt(d2) / pow(gap * dt, beta)
        if q > best:
            best = q
    return best


def weighted_holder_sup(object u_in, double dt, double beta, double rho):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] u = np.ascontiguousarray(u_in, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m = u.shape[1]
    cdef Py_ssize_t gap, j, i
    cdef double sup_val = 0.0, sup_inc = 0.0
    cdef double d, diff, v, q
    for j in range(n):
        d = 0.0
        for i in range(m):
            d += u[j, i] * u[j, i]
        v = exp(-rho * j * dt) * sqrt(d)
        if v > sup_val:
            sup_val = v
    for gap in range(1, n):
        q = 0.0
        for j in range(n - gap):
            if j == 0:
                continue
            d = 0.0
            for i in range(m):
                diff = u[j + gap, i] - u[j, i]
                d += diff * diff
            v = pow(j * dt, beta) * exp(-rho * (j + gap) * dt) * sqrt(d)
            if v > q:
                q = v
        q /= pow(gap * dt, beta)
        if q > sup_inc:
            sup_inc = q
    return sup_val + sup_inc
