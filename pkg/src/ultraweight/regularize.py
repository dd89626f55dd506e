"""Log-convex regularizations, associated functions and contact-set diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .seq_core import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    ConditionVerdict,
    InputError,
    WeightSeq,
    log_factorial,
)

LOG2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class HullResult:
    """Largest log-convex minorant of ``k! M_k`` (weak) or ``M_k`` (strong).

    ``vertices`` is the contact set (every k where the minorant touches the
    input); ``extreme`` holds only the corner points of the hull.
    """

    regularized: WeightSeq
    vertices: np.ndarray
    extreme: np.ndarray
    provisional_from: int
    flavor: str
    degenerate: bool = False
    source: WeightSeq | None = None

    def hull_log(self) -> np.ndarray:
        """Hull values in the flavor's coordinates (log k!M^bc_k or log M^bc_k)."""
        if self.flavor == "weak":
            return self.regularized.log_kfact()
        return np.asarray(self.regularized.logM)

    def is_vertex(self) -> np.ndarray:
        mask = np.zeros(self.regularized.kmax + 1, dtype=bool)
        mask[self.vertices] = True
        return mask


def _last_quartile_slope(y: np.ndarray) -> float:
    n = y.shape[0]
    lo = (3 * (n - 1)) // 4
    if n - 1 - lo < 1:
        return float(y[-1] - y[-2])
    return float((y[-1] - y[lo]) / (n - 1 - lo))


def lc_minorant(M: WeightSeq, flavor: str = "weak") -> HullResult:
    """Lower convex hull of (k, log k!M_k) (weak) or (k, log M_k) (strong)."""
    if flavor not in ("weak", "strong"):
        raise InputError(f"unknown flavor {flavor!r}", "flavor")
    if M.kmax < 2:
        raise InputError("window too short for a hull (need kmax >= 2)", "K")
    k = M.k
    lf = log_factorial(k)
    y = M.log_kfact() if flavor == "weak" else np.asarray(M.logM)
    ext = kernels.lower_hull(np.ascontiguousarray(y))
    hull = np.interp(k, ext, y[ext])
    contact = np.abs(y - hull) <= 1e-12 * (1.0 + np.abs(y))
    contact[ext] = True
    if flavor == "weak":
        reg = np.where(contact, M.logM, hull - lf)
    else:
        reg = np.where(contact, M.logM, hull)
    interior = ext[ext < M.kmax]
    provisional = int(interior[-1]) + 1 if interior.size > 1 else 1
    degenerate = flavor == "weak" and _last_quartile_slope(y) <= 0
    if degenerate:
        provisional = 0
    out = WeightSeq(reg, f"{M.label}^bc" if flavor == "weak" else f"{M.label}^lc",
                    f"lc_minorant[{flavor}]({M.provenance})")
    return HullResult(out, np.nonzero(contact)[0], ext, provisional, flavor, degenerate, M)


# --------------------------------------------------------------------------
# associated functions


@dataclass(frozen=True, eq=False)
class AssocFunctionSample:
    t_grid: np.ndarray
    values: np.ndarray
    argmax: np.ndarray
    truncated: np.ndarray
    which: str
    log_t: np.ndarray | None = None


def _assoc_log(M: WeightSeq, which: str, log_t: np.ndarray):
    y = np.ascontiguousarray(M.log_kfact())
    if which == "T":
        cap = np.full(log_t.shape[0], M.kmax, dtype=np.int64)
    elif which == "S":
        with np.errstate(over="ignore"):
            cap = np.floor(np.exp(np.minimum(log_t, 700.0)) + 1e-12).astype(np.int64)
    else:
        raise InputError(f"unknown associated function {which!r}", "which")
    vals, arg = kernels.assoc_max(y, np.ascontiguousarray(log_t, dtype=float), np.ascontiguousarray(cap))
    return vals, arg


def assoc_function(M: WeightSeq, which: str, t_grid=None, *, log_t=None) -> AssocFunctionSample:
    """log T_M(t) = max_k (k log t - log k!M_k), or S_M with k <= t.

    Pass ``log_t`` instead of ``t_grid`` to sample beyond the float range of t.
    """
    if log_t is None:
        t_grid = np.asarray(t_grid, dtype=float)
        if np.any(t_grid <= 0) or np.any(np.diff(t_grid) < 0):
            raise InputError("tGrid must be positive and sorted", "tGrid")
        log_t = np.log(t_grid)
    else:
        log_t = np.asarray(log_t, dtype=float)
        with np.errstate(over="ignore"):
            t_grid = np.exp(log_t)
    vals, arg = _assoc_log(M, which, log_t)
    truncated = (arg == M.kmax) if which == "T" else np.zeros(arg.shape[0], dtype=bool)
    return AssocFunctionSample(t_grid, vals, arg, truncated, which, log_t)


def bc_from_assoc(M: WeightSeq, log_t: np.ndarray, refine: bool = True, tol: float = 1e-12) -> np.ndarray:
    """log M^bc_k recovered through the dual formula sup_t t^k / T_M(t) / k!.

    Sampling only at grid points misses indices off the contact set, where
    the supremum is attained at a single t. With ``refine`` the grid is
    bisected wherever the argmax of T changes, which finds every kink of
    log T between the grid ends.
    """
    u = [float(x) for x in np.sort(np.asarray(log_t, dtype=float))]
    if refine:
        vals, arg = _assoc_log(M, "T", np.asarray(u))
        pts = list(u)
        stack = [(u[i], u[i + 1], int(arg[i]), int(arg[i + 1])) for i in range(len(u) - 1) if arg[i] != arg[i + 1]]
        while stack:
            a, b, ia, ib = stack.pop()
            if b - a <= tol * (1.0 + abs(a)):
                continue
            m = 0.5 * (a + b)
            _, am = _assoc_log(M, "T", np.array([m]))
            im = int(am[0])
            pts.append(m)
            if im != ia:
                stack.append((a, m, ia, im))
            if im != ib:
                stack.append((m, b, im, ib))
        u = sorted(pts)
    u_arr = np.asarray(u)
    logT, _ = _assoc_log(M, "T", u_arr)
    k = M.k
    dual = np.max(k[:, None] * u_arr[None, :] - logT[None, :], axis=1)
    return dual - log_factorial(k)


def b_o_regularization(M: WeightSeq, t_max: float, points_per_octave: int = 64, tol: float = 1e-6) -> WeightSeq:
    """M^bo_k = (1/k!) sup_{t >= k} t^k / S_M(t), maximized on a log grid then refined."""
    if t_max < M.kmax:
        raise InputError("tMax must be >= kmax", "tMax")
    du = LOG2 / points_per_octave
    u_grid = np.arange(0.0, math.log(t_max) + du, du)
    logS, _ = _assoc_log(M, "S", u_grid)
    out = np.empty(M.kmax + 1)
    out[0] = M.logM[0]

    def logS_at(x):
        v, _ = _assoc_log(M, "S", np.array([x]))
        return float(v[0])

    for kk in range(1, M.kmax + 1):
        lo = math.log(kk)
        sel = u_grid >= lo - 1e-15
        uu = np.concatenate([[lo], u_grid[sel]])
        ss = np.concatenate([[logS_at(lo)], logS[sel]])
        g = kk * uu - ss
        i = int(np.argmax(g))
        best = float(g[i])
        a, b = uu[max(i - 1, 0)], uu[min(i + 1, uu.shape[0] - 1)]
        if b > a:
            res = minimize_scalar(lambda x: -(kk * x - logS_at(x)), bounds=(a, b), method="bounded",
                                  options={"xatol": tol})
            best = max(best, -float(res.fun))
        out[kk] = best - float(log_factorial(kk))
    return WeightSeq(out, f"{M.label}^bo", f"b_o_regularization({M.provenance})")


# --------------------------------------------------------------------------
# diagnostics


@dataclass
class ContactRatios:
    ratios: np.ndarray
    bounded: str
    lower_bounds: np.ndarray
    vertices: np.ndarray
    shifted_ratios: np.ndarray = field(default_factory=lambda: np.zeros(0))


def contact_ratio_lower_bound(a):
    """(1/2) a/(a-1) log a - log 2 - 1, continued by its limit 1/2 at a = 1."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        core = np.where(a == 1.0, 1.0, a / (a - 1.0) * np.log(a))
    return 0.5 * core - LOG2 - 1.0


def contact_ratio_diagnostic(h: HullResult) -> ContactRatios:
    """Ratios of consecutive interior contact indices and the gap they force."""
    v = np.asarray([x for x in h.vertices if 0 < x < h.provisional_from], dtype=float)
    if v.shape[0] < 3:
        raise InputError(f"need >= 3 interior vertices, found {v.shape[0]}", "vertices")
    ratios = v[1:] / v[:-1]
    shifted = (v[1:] + 1.0) / (v[:-1] + 1.0)
    if ratios[-1] > ratios[-2] * (1.0 + 1e-12):
        bounded = "no-trend"
    else:
        bounded = "yes-on-window"
    return ContactRatios(ratios, bounded, contact_ratio_lower_bound(ratios), v.astype(np.int64), shifted)


def cartan_check(deriv_bounds: WeightSeq, values_at0, lam: float) -> ConditionVerdict:
    """|f^(k)(0)| <= 2 e^k k! M^bc_k from derivative bounds on [-lam, lam]."""
    if not lam > 0:
        raise InputError("lambda must be > 0", "lambda")
    y = np.asarray(deriv_bounds.logM)
    k = deriv_bounds.k
    gap = y[0] - (k * math.log(lam) + y)
    bad = np.nonzero(gap > 1e-12 * (1.0 + np.abs(y)))[0]
    if bad.size:
        raise InputError(f"hypothesis M_0 <= lambda^k M_k violated at k={int(bad[0])}", "lambda")
    vals = np.asarray(values_at0, dtype=float)
    if vals.shape[0] > deriv_bounds.kmax + 1:
        raise InputError("more derivative values than bound entries", "valuesAt0")
    h = lc_minorant(deriv_bounds, "weak")
    kk = np.arange(vals.shape[0])
    bound = LOG2 + kk + log_factorial(kk) + h.regularized.logM[: vals.shape[0]]
    with np.errstate(invalid="ignore"):
        slack = bound - vals
    window = (0, int(vals.shape[0] - 1))
    viol = np.nonzero(slack < -1e-12 * (1.0 + np.abs(bound)))[0]
    finite = slack[np.isfinite(slack)]
    witness = {"minSlack": float(finite.min()) if finite.size else math.inf, "lambda": lam}
    if viol.size:
        j = int(viol[0])
        return ConditionVerdict("cartan", window, FAILS, witness, counterexample={
            "k": j, "logValue": float(vals[j]), "logBound": float(bound[j])})
    status = HOLDS if vals.shape[0] else INCONCLUSIVE
    return ConditionVerdict("cartan", window, status, witness,
                            diagnostics=list(zip(kk.tolist(), slack.tolist())))
