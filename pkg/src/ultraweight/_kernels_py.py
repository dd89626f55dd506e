"""Pure numpy fallback for the compiled kernels.

Every function mirrors ``_kernels.pyx`` exactly, including tie-breaking
(first maximiser wins), so results are interchangeable.
"""

import numpy as np


def lower_hull(y):
    """Extreme vertices of the lower convex hull of (k, y[k])."""
    y = np.asarray(y, dtype=float)
    hull = []
    for k in range(y.shape[0]):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a - o) * (y[k] - y[o]) - (y[a] - y[o]) * (k - o)
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(k)
    return np.asarray(hull, dtype=np.int64)


def fdb_table(logm):
    logm = np.asarray(logm, dtype=float)
    kmax = logm.shape[0] - 1
    P = np.full((kmax + 1, kmax + 1), -np.inf)
    C = np.zeros((kmax + 1, kmax + 1), dtype=np.int32)
    n = np.arange(kmax + 1)
    P[1:, 1] = logm[1:]
    C[1:, 1] = n[1:]
    a = np.arange(1, kmax + 1)
    rest = n[:, None] - a[None, :]
    valid = rest >= 0
    rest_c = np.where(valid, rest, 0)
    for j in range(2, kmax + 1):
        cand = logm[a][None, :] + P[rest_c, j - 1]
        cand[~valid] = -np.inf
        best = cand.argmax(axis=1)
        vals = cand[n, best]
        ok = n >= j
        P[ok, j] = vals[ok]
        C[ok, j] = a[best[ok]]
    out = np.zeros(kmax + 1)
    bj = np.zeros(kmax + 1, dtype=np.int64)
    if kmax >= 1:
        tot = logm[None, 1:] + P[1:, 1:]
        j_best = tot.argmax(axis=1)
        out[1:] = tot[np.arange(kmax), j_best]
        bj[1:] = j_best + 1
    return out, bj, C


def legendre_sweep(phi, s, t):
    """Grid argmax of ``t*s - phi(s)`` for ascending ``t`` by a monotone pointer."""
    phi = np.asarray(phi, dtype=float)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    ns = s.shape[0]
    idx = np.empty(t.shape[0], dtype=np.int64)
    p = 0
    for i, ti in enumerate(t):
        while p + 1 < ns and ti * s[p + 1] - phi[p + 1] > ti * s[p] - phi[p]:
            p += 1
        idx[i] = p
    return idx


def maxplus_conv(a, b, lo):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n_out = min(a.shape[0], b.shape[0])
    n = np.arange(n_out)[:, None]
    j = np.arange(n_out)[None, :]
    valid = (j >= lo) & (j <= n - lo)
    cand = np.where(valid, a[:n_out][None, :] + b[np.clip(n - j, 0, n_out - 1)], -np.inf)
    arg = cand.argmax(axis=1).astype(np.int64)
    c = cand[np.arange(n_out), arg]
    arg[~valid.any(axis=1)] = -1
    return c, arg


def assoc_max(y, u, cap):
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    cap = np.minimum(np.asarray(cap, dtype=np.int64), y.shape[0] - 1)
    k = np.arange(y.shape[0])
    vals = k[None, :] * u[:, None] - y[None, :]
    vals[k[None, :] > cap[:, None]] = -np.inf
    arg = vals.argmax(axis=1).astype(np.int64)
    return vals[np.arange(u.shape[0]), arg], arg
