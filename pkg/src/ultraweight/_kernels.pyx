# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Same signatures as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def lower_hull(const double[::1] y):
    """Extreme vertices of the lower convex hull of (k, y[k])."""
    cdef Py_ssize_t n = y.shape[0]
    cdef cnp.int64_t[::1] hull = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t top = 0, k
    cdef cnp.int64_t o, a
    cdef double cross
    for k in range(n):
        while top >= 2:
            o = hull[top - 2]
            a = hull[top - 1]
            cross = (a - o) * (y[k] - y[o]) - (y[a] - y[o]) * (k - o)
            if cross <= 0.0:
                top -= 1
            else:
                break
        hull[top] = k
        top += 1
    return np.asarray(hull[:top]).copy()


def fdb_table(const double[::1] logm):
    """Max-plus DP for the closure.

    Returns ``(log_closure, best_j, choice)`` where ``choice[n, j]`` is the
    smallest first part of a best partition of ``n`` into ``j`` parts.
    """
    cdef Py_ssize_t kmax = logm.shape[0] - 1
    cdef Py_ssize_t n, j, a
    cdef double best, cand
    cdef cnp.int32_t besta
    P_arr = np.full((kmax + 1, kmax + 1), -np.inf)
    C_arr = np.zeros((kmax + 1, kmax + 1), dtype=np.int32)
    cdef double[:, ::1] P = P_arr
    cdef cnp.int32_t[:, ::1] C = C_arr
    out_arr = np.empty(kmax + 1)
    bj_arr = np.zeros(kmax + 1, dtype=np.int64)
    cdef double[::1] out = out_arr
    cdef cnp.int64_t[::1] bj = bj_arr

    for n in range(1, kmax + 1):
        P[n, 1] = logm[n]
        C[n, 1] = <cnp.int32_t>n
    for j in range(2, kmax + 1):
        for n in range(j, kmax + 1):
            best = -INFINITY
            besta = 0
            for a in range(1, n - j + 2):
                cand = logm[a] + P[n - a, j - 1]
                if cand > best:
                    best = cand
                    besta = <cnp.int32_t>a
            P[n, j] = best
            C[n, j] = besta
    out[0] = 0.0
    bj[0] = 0
    for n in range(1, kmax + 1):
        best = -INFINITY
        besta = 0
        for j in range(1, n + 1):
            cand = logm[j] + P[n, j]
            if cand > best:
                best = cand
                besta = <cnp.int32_t>j
        out[n] = best
        bj[n] = besta
    return out_arr, bj_arr, C_arr


def legendre_sweep(const double[::1] phi, const double[::1] s, const double[::1] t):
    """Grid argmax of ``t*s - phi(s)`` for ascending ``t`` by a monotone pointer."""
    cdef Py_ssize_t ns = s.shape[0], nt = t.shape[0]
    cdef Py_ssize_t i, p = 0
    idx_arr = np.empty(nt, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = idx_arr
    for i in range(nt):
        while p + 1 < ns and t[i] * s[p + 1] - phi[p + 1] > t[i] * s[p] - phi[p]:
            p += 1
        idx[i] = p
    return idx_arr


def maxplus_conv(const double[::1] a, const double[::1] b, Py_ssize_t lo):
    """``c[n] = max_{lo <= j <= n-lo} a[j] + b[n-j]`` with the smallest argmax."""
    cdef Py_ssize_t n_out = min(a.shape[0], b.shape[0])
    cdef Py_ssize_t n, j
    cdef double best, cand
    c_arr = np.full(n_out, -np.inf)
    arg_arr = np.full(n_out, -1, dtype=np.int64)
    cdef double[::1] c = c_arr
    cdef cnp.int64_t[::1] arg = arg_arr
    for n in range(2 * lo, n_out):
        best = -INFINITY
        for j in range(lo, n - lo + 1):
            cand = a[j] + b[n - j]
            if cand > best:
                best = cand
                arg[n] = j
        c[n] = best
    return c_arr, arg_arr


def assoc_max(const double[::1] y, const double[::1] u, const cnp.int64_t[::1] cap):
    """``max_{k <= cap[i]} k*u[i] - y[k]`` with the smallest argmax."""
    cdef Py_ssize_t nu = u.shape[0], K = y.shape[0] - 1
    cdef Py_ssize_t i, k, top
    cdef double best, cand
    v_arr = np.empty(nu)
    arg_arr = np.empty(nu, dtype=np.int64)
    cdef double[::1] v = v_arr
    cdef cnp.int64_t[::1] arg = arg_arr
    for i in range(nu):
        top = cap[i] if cap[i] < K else K
        best = -y[0]
        arg[i] = 0
        for k in range(1, top + 1):
            cand = k * u[i] - y[k]
            if cand > best:
                best = cand
                arg[i] = k
        v[i] = best
    return v_arr, arg_arr
