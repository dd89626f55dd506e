"""Weight functions ω, Young conjugates φ* and the associated sequences Ω^ρ.

Everything works in the coordinate ``u = log t``: ``φ(u) = ω(e^u)``. Tail
checks use ``log φ`` so that grids can reach t = e^2000 without overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .regularize import assoc_function
from .seq_core import (
    safe_exp,
    FAILS,
    HOLDS,
    ConditionVerdict,
    InputError,
    WeightSeq,
    _canonical,
    check_relation,
    log_factorial,
    tail_trend,
)

S_GRID_POINTS = 4096
T0_TAIL = 10.0
WITNESS_POWERS = [2.0**i for i in range(21)]
LAMBDA_GRID = np.geomspace(1.0, 1e3, 32)
T0_CHOICES = (1.0, 10.0, 100.0)
LOG2 = math.log(2.0)


def _log_expm1(x):
    """log(e^x - 1) for x > 0, stable at both ends."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 0, x + np.log(-np.expm1(-np.maximum(x, 1e-300))), -np.inf)


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """ω : [0, ∞) → [0, ∞) with ω = 0 on [0, 1].

    Builtins: ``gevrey_root`` ω(t) = max(0, t^(1/(1+s)) - 1), ``power_log``
    ω(t) = max(0, log t)^s with s > 1, ``linear_cutoff`` ω(t) = max(0, t - 1).
    ``sampled`` interpolates given (t, ω) pairs linearly in t and extends the
    last segment linearly.
    """

    kind: str
    params: tuple = ()
    t_samples: np.ndarray | None = None
    omega_samples: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "gevrey_root":
            if len(self.params) != 1 or self.params[0] < 0:
                raise InputError("gevrey_root needs s >= 0", "s")
        elif self.kind == "power_log":
            if len(self.params) != 1 or self.params[0] <= 1:
                raise InputError("power_log needs s > 1", "s")
        elif self.kind == "linear_cutoff":
            object.__setattr__(self, "params", ())
        elif self.kind == "sampled":
            self._init_sampled()
        else:
            raise InputError(f"unknown weight kind {self.kind!r}", "kind")
        self._validate()

    def _init_sampled(self):
        t = np.asarray(self.t_samples, dtype=float)
        w = np.asarray(self.omega_samples, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.shape[0] < 2:
            raise InputError("sampled weight needs matching t and omega arrays", "t")
        if np.any(np.diff(t) <= 0) or t[0] < 0:
            raise InputError("sampled t must be nonnegative and strictly increasing", "t")
        if np.any(w[t <= 1.0] != 0):
            raise InputError("omega must vanish on [0, 1]", "omega")
        if t[0] > 0:
            t, w = np.concatenate([[0.0], t]), np.concatenate([[0.0], w])
        if t[t <= 1.0].shape[0] and t[t <= 1.0][-1] < 1.0:
            pos = np.searchsorted(t, 1.0)
            t, w = np.insert(t, pos, 1.0), np.insert(w, pos, 0.0)
        t.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "t_samples", t)
        object.__setattr__(self, "omega_samples", w)

    # -- evaluation --------------------------------------------------------

    def log_phi(self, u) -> np.ndarray:
        """log φ(u) = log ω(e^u); -inf where ω vanishes."""
        u = np.asarray(u, dtype=float)
        if self.kind == "linear_cutoff":
            return _log_expm1(u)
        if self.kind == "gevrey_root":
            return _log_expm1(u / (1.0 + self.params[0]))
        if self.kind == "power_log":
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(u > 0, self.params[0] * np.log(np.maximum(u, 1e-300)), -np.inf)
        return self._sampled_log_phi(u)

    def _sampled_log_phi(self, u):
        t, w = self.t_samples, self.omega_samples
        slope = (w[-1] - w[-2]) / (t[-1] - t[-2])
        ut = math.log(t[-1])
        out = np.empty_like(u)
        inside = u <= ut
        with np.errstate(divide="ignore", over="ignore"):
            vals = np.interp(np.exp(u[inside]), t, w)
            out[inside] = np.where(vals > 0, np.log(np.maximum(vals, 1e-300)), -np.inf)
            beyond = u[~inside]
            if slope > 0:
                # ω = slope e^u + (w_n - slope t_n)
                c = (w[-1] - slope * t[-1]) / slope
                out[~inside] = math.log(slope) + beyond + np.log1p(c * np.exp(-beyond))
            else:
                out[~inside] = math.log(w[-1]) if w[-1] > 0 else -np.inf
        return out

    def phi(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore"):
            if self.kind == "linear_cutoff":
                return np.where(u > 0, np.expm1(np.maximum(u, 0.0)), 0.0)
            if self.kind == "gevrey_root":
                a = 1.0 / (1.0 + self.params[0])
                return np.where(u > 0, np.expm1(a * np.maximum(u, 0.0)), 0.0)
            if self.kind == "power_log":
                return np.where(u > 0, np.maximum(u, 0.0) ** self.params[0], 0.0)
            return np.exp(self._sampled_log_phi(u))

    def omega(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, self.phi(np.log(np.maximum(t, 1e-300))), 0.0)

    # -- bookkeeping -------------------------------------------------------

    def spec(self) -> dict:
        if self.kind in ("gevrey_root", "power_log"):
            return {"kind": self.kind, "s": float(self.params[0])}
        if self.kind == "linear_cutoff":
            return {"kind": "linear_cutoff"}
        return {"kind": "sampled", "t": self.t_samples.tolist(), "omega": self.omega_samples.tolist()}

    @property
    def label(self) -> str:
        if self.kind == "gevrey_root":
            return f"gamma^{self.params[0]:g}"
        if self.kind == "power_log":
            return f"(log t)^{self.params[0]:g}"
        return self.kind

    @cached_property
    def convexity_window(self) -> float:
        """Largest u on which φ stays comfortably finite for second differences."""
        hi = 2000.0
        while hi > 1.0 and not np.isfinite(self.phi(hi)) or self.phi(hi) > 1e250:
            hi *= 0.5
        if self.kind == "sampled":
            hi = max(min(hi, math.log(self.t_samples[-1]) + 2.0), 1.0)
        return hi

    def _validate(self):
        u = np.linspace(0.0, self.convexity_window, S_GRID_POINTS)
        ph = self.phi(u)
        if np.any(np.diff(ph) < -1e-12 * (1.0 + np.abs(ph[1:]))):
            raise InputError("omega must be nondecreasing", "omega")
        h = u[1] - u[0]
        second = ph[:-2] - 2.0 * ph[1:-1] + ph[2:]
        if np.any(second < -1e-8 * h * (1.0 + np.abs(ph[1:-1]))):
            raise InputError("phi(u) = omega(e^u) is not convex", "omega")
        if self.kind == "sampled" and not (self.omega_samples[-1] > self.omega_samples[-2]):
            raise InputError("omega must grow without bound (last segment is flat)", "omega")


def gevrey_root(s: float) -> WeightFunction:
    return WeightFunction("gevrey_root", (float(s),))


def power_log(s: float) -> WeightFunction:
    return WeightFunction("power_log", (float(s),))


def linear_cutoff() -> WeightFunction:
    return WeightFunction("linear_cutoff")


def sampled(t, omega) -> WeightFunction:
    return WeightFunction("sampled", (), np.asarray(t, dtype=float), np.asarray(omega, dtype=float))


# --------------------------------------------------------------------------
# Young conjugate


@dataclass(frozen=True, eq=False)
class ConjugateTable:
    t_grid: np.ndarray
    phistar: np.ndarray
    argmax: np.ndarray
    truncated: np.ndarray
    s_max: float


def _auto_s_max(w: WeightFunction, t_max: float) -> float:
    s = max(2.0 * math.log(t_max + math.e), 1.0)
    for _ in range(80):
        d = 1e-3 * s
        slope = (float(w.phi(s + d)) - float(w.phi(s))) / d
        if slope > 1.05 * t_max + 1.0:
            return s
        s *= 2.0
    raise InputError("could not bracket the conjugate maximizer", "tGrid")


def young_conjugate(w: WeightFunction, t_grid, s_max: float | None = None) -> ConjugateTable:
    """φ*(t) = sup_{s >= 0} (s t - φ(s)) by a monotone grid sweep and one local refinement."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.shape[0] == 0:
        raise InputError("tGrid must be a nonempty array", "tGrid")
    if np.any(t < 0) or np.any(np.diff(t) < 0):
        raise InputError("tGrid must be sorted and nonnegative", "tGrid")
    s_max = _auto_s_max(w, float(t[-1])) if s_max is None else float(s_max)
    s = np.linspace(0.0, s_max, S_GRID_POINTS)
    ph = w.phi(s)
    idx = kernels.legendre_sweep(np.ascontiguousarray(ph), s, np.ascontiguousarray(t))
    vals = t * s[idx] - ph[idx]
    arg = s[idx].copy()
    for i, ti in enumerate(t):
        j = int(idx[i])
        lo, hi = s[max(j - 1, 0)], s[min(j + 1, S_GRID_POINTS - 1)]
        res = minimize_scalar(lambda x: float(w.phi(x)) - ti * x, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, hi)})
        cand = -float(res.fun)
        if cand > vals[i]:
            vals[i] = cand
            arg[i] = float(res.x)
    truncated = idx == S_GRID_POINTS - 1
    return ConjugateTable(t, vals, arg, truncated, s_max)


def phi_star(w: WeightFunction, t) -> np.ndarray:
    """φ* at arbitrary nonnegative points (any order); raises on truncation."""
    t = np.asarray(t, dtype=float)
    order = np.argsort(t, kind="stable")
    tab = young_conjugate(w, t[order])
    if tab.truncated.any():
        raise InputError("conjugate truncated: maximizer at the s-grid edge", "sMax")
    out = np.empty_like(t)
    out[order] = tab.phistar
    return out


def omega_sequence(w: WeightFunction, rho: float, kmax: int) -> WeightSeq:
    """Ω^ρ_k = exp(φ*(ρk)/ρ) / k!."""
    if not rho > 0:
        raise InputError("rho must be > 0", "rho")
    k = np.arange(kmax + 1)
    ps = phi_star(w, rho * k)
    ps[0] = 0.0
    spec = {"kind": "omega_sequence", "weight": w.spec(), "rho": float(rho), "K": int(kmax)}
    return WeightSeq(ps / rho - log_factorial(k), f"Omega[{w.label}]^{rho:g}", _canonical(spec))


# --------------------------------------------------------------------------
# (ω1)-(ω8)


def default_log_t_grid(u_max: float = 2000.0) -> np.ndarray:
    """Dense near t = 1, geometric in log t up to ``u_max`` (t = e^u_max)."""
    return np.unique(np.concatenate([np.linspace(0.0, 20.0, 2001), np.geomspace(20.0, u_max, 2000)]))


def _tail(u, t0=T0_TAIL):
    return u[u >= math.log(t0)]


def check_omega_condition(w: WeightFunction, cond: str, log_t=None) -> ConditionVerdict:
    """Decide one of w1..w8 on a grid given in log t."""
    u = default_log_t_grid() if log_t is None else np.asarray(log_t, dtype=float)
    if u[-1] - max(u[0], 0.0) < 4 * math.log(10.0):
        raise InputError("grid must cover at least 4 decades of t", "tGrid")
    window = (float(u[0]), float(u[-1]))
    tail = _tail(u)
    lp = w.log_phi(tail)

    def trend_verdict(name, series, want, witness, holds_on):
        tr = tail_trend(series, tail)
        witness = dict(witness, trend=tr)
        ok = holds_on(tr)
        return ConditionVerdict(name, window, HOLDS if ok else FAILS, witness,
                                counterexample=None if ok else {"trend": tr, "wanted": want})

    if cond == "w1":
        r = w.log_phi(tail + LOG2) - lp
        return trend_verdict("w1", r, "bounded", {"C": float(np.exp(r.max()))}, lambda tr: tr != "up")
    if cond == "w2":
        r = lp - np.log(tail)
        return trend_verdict("w2", r, "up", {"minRatio": float(np.exp(r.min()))}, lambda tr: tr == "up")
    if cond == "w3":
        return _check_convexity(w)
    if cond == "w4":
        r = lp - tail
        return trend_verdict("w4", r, "bounded", {"C": float(np.exp(r.max()))}, lambda tr: tr != "up")
    if cond == "w5":
        r = lp - tail
        return trend_verdict("w5", r, "down", {"lastRatio": float(np.exp(r[-1]))}, lambda tr: tr == "down")
    if cond == "w6":
        return _check_w6(w, u, window)
    if cond == "w7":
        return _check_w7(w, u, window)
    if cond == "w8":
        return _check_w8(w, u, window)
    raise InputError(f"unknown omega condition {cond!r}", "cond")


def _check_convexity(w: WeightFunction) -> ConditionVerdict:
    hi = w.convexity_window
    u = np.linspace(0.0, hi, S_GRID_POINTS)
    ph = w.phi(u)
    h = u[1] - u[0]
    second = ph[:-2] - 2.0 * ph[1:-1] + ph[2:]
    bad = np.nonzero(second < -1e-8 * h * (1.0 + np.abs(ph[1:-1])))[0]
    window = (0.0, hi)
    if bad.size:
        i = int(bad[0]) + 1
        return ConditionVerdict("w3", window, FAILS, counterexample={"u": float(u[i]), "second": float(second[i - 1])})
    return ConditionVerdict("w3", window, HOLDS, witness={"minSecondDifference": float(second.min())})


def _check_w6(w, u, window) -> ConditionVerdict:
    lp = w.log_phi(u)
    lhs = LOG2 + lp
    tail = u >= math.log(T0_TAIL)
    best = None
    for H in WITNESS_POWERS:
        rhs = np.logaddexp(w.log_phi(u + math.log(H)), math.log(H))
        gap = lhs - rhs
        bad = np.nonzero(gap > 1e-12 * (1.0 + np.abs(rhs)))[0]
        # 2ω(t) / ω(Ht) must end up <= 1, otherwise the gap grows like ω(t)
        ratio = lhs[tail] - w.log_phi(u[tail] + math.log(H))
        end_ratio = float(np.median(ratio[ratio.shape[0] // 2:]))
        if bad.size == 0 and end_ratio <= 1e-6:
            return ConditionVerdict("w6", window, HOLDS, witness={"H": H, "tailLogRatio": end_ratio})
        i = int(bad[0]) if bad.size else int(np.nonzero(tail)[0][-1])
        best = {"H": H, "t_log": float(u[i]), "gap_log": float(gap[i]), "tailLogRatio": end_ratio}
    return ConditionVerdict("w6", window, FAILS, counterexample=best,
                            notes=[f"no H in 2^0..2^{len(WITNESS_POWERS) - 1} works on the grid"])


def _check_w7(w, u, window) -> ConditionVerdict:
    worst_pair = None
    best = None
    for t0 in T0_CHOICES:
        uu = u[u >= math.log(t0)]
        lp = w.log_phi(uu)
        ok = np.isfinite(lp)
        uu, lp = uu[ok], lp[ok]
        if uu.size == 0:
            continue
        req = -np.inf
        for lam in LAMBDA_GRID:
            r = w.log_phi(uu + math.log(lam)) - math.log(lam) - lp
            i = int(np.argmax(r))
            if r[i] > req:
                req = float(r[i])
                worst_pair = {"lambda": float(lam), "t_log": float(uu[i]), "ratio": float(np.exp(r[i])), "t0": t0}
        for C in WITNESS_POWERS:
            if req <= math.log(C) + 1e-9:
                if best is None or C < best["C"]:
                    best = {"C": C, "t0": t0, "requiredC": safe_exp(req)}
                break
    if best is not None:
        return ConditionVerdict("w7", window, HOLDS, witness=best)
    return ConditionVerdict("w7", window, FAILS, counterexample=worst_pair,
                            notes=["largest ω(λt)/(λω(t)) found; this is the (λ, t) witness of failure"])


def _check_w8(w, u, window) -> ConditionVerdict:
    lhs = w.log_phi(2.0 * u)
    last = None
    for H in WITNESS_POWERS:
        base = np.logaddexp(w.log_phi(u + math.log(H)), 0.0)
        need = float(np.max(lhs - base))
        for C in WITNESS_POWERS:
            if need <= math.log(C) + 1e-12:
                return ConditionVerdict("w8", window, HOLDS, witness={"C": C, "H": H})
        last = {"H": H, "requiredLogC": need}
    return ConditionVerdict("w8", window, FAILS, counterexample=last,
                            notes=["no (C, H) in the 2^i grid works"])


def check_subadditive(w: WeightFunction, t_grid=None) -> ConditionVerdict:
    """ω(s + t) <= ω(s) + ω(t) on all grid pairs."""
    t = np.geomspace(1e-2, 1e4, 200) if t_grid is None else np.asarray(t_grid, dtype=float)
    om = w.omega(t)
    lhs = w.omega(t[:, None] + t[None, :])
    gap = lhs - (om[:, None] + om[None, :])
    i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    window = (float(t[0]), float(t[-1]))
    if gap[i, j] > 1e-12 * (1.0 + abs(lhs[i, j])):
        return ConditionVerdict("subadditive", window, FAILS,
                                counterexample={"s": float(t[i]), "t": float(t[j]), "gap": float(gap[i, j])})
    return ConditionVerdict("subadditive", window, HOLDS)


# --------------------------------------------------------------------------
# inequality suite


def _scan_verdict(name, gap, where, window, witness=None) -> ConditionVerdict:
    bad = np.nonzero(gap > 0)[0]
    if bad.size:
        return ConditionVerdict(name, window, FAILS, witness or {}, counterexample=where(int(bad[0])))
    return ConditionVerdict(name, window, HOLDS, witness or {})


def _tol(*arrays):
    return 1e-12 * (1.0 + sum(np.abs(a) for a in arrays))


def _eq5_2(w, params):
    t = np.asarray(params.get("t_grid", np.linspace(0.0, 50.0, 101)), dtype=float)
    tt, ss = np.meshgrid(t, t, indexing="ij")
    pts = np.unique(np.concatenate([t, (tt + ss).ravel(), 2.0 * t]))
    ps = phi_star(w, pts)

    def at(x):
        return ps[np.searchsorted(pts, x)]

    a, b = at(tt), at(ss)
    mid = at(tt + ss)
    hi = 0.5 * at(2.0 * tt) + 0.5 * at(2.0 * ss)
    gap = np.maximum(a + b - mid - _tol(a, b, mid), mid - hi - _tol(mid, hi)).ravel()
    return _scan_verdict("eq5_2", gap, lambda i: {"t": float(tt.ravel()[i]), "s": float(ss.ravel()[i])},
                         (float(t[0]), float(t[-1])), {"pairs": int(gap.size)})


def _log_kf(w, rho, kmax):
    """log(k! Ω^ρ_k) = φ*(ρk)/ρ."""
    k = np.arange(kmax + 1)
    ps = phi_star(w, rho * k)
    ps[0] = 0.0
    return ps / rho


def _eq5_6(w, params):
    rho = float(params.get("rho", 1.0))
    K = int(params.get("kmax", 100))
    a = _log_kf(w, rho, K)
    b = _log_kf(w, 2.0 * rho, K)
    j, k = np.meshgrid(np.arange(K + 1), np.arange(K + 1), indexing="ij")
    ok = j + k <= K
    j, k = j[ok], k[ok]
    lower = a[j] + a[k] - a[j + k] - _tol(a[j], a[k], a[j + k])
    upper = a[j + k] - b[j] - b[k] - _tol(a[j + k], b[j], b[k])
    gap = np.maximum(lower, upper)
    return _scan_verdict("eq5_6", gap, lambda i: {"j": int(j[i]), "k": int(k[i]),
                                                   "half": "lower" if lower[i] > 0 else "upper"},
                         (0, K), {"rho": rho, "pairs": int(gap.size)})


def _eq5_10(w, params):
    sigma = float(params.get("sigma", 2.0))
    rho = float(params.get("rho", 1.0))
    K = int(params.get("kmax", 200))
    k = np.arange(K + 1)
    a = _log_kf(w, rho, K)
    window = (0, K)
    for H in WITNESS_POWERS:
        gap = k * math.log(sigma) + a - _log_kf(w, H * rho, K)
        if tail_trend(gap[1:], k[1:]) != "up":
            log_c = float(gap.max())
            return ConditionVerdict("eq5_10", window, HOLDS, {"sigma": sigma, "rho": rho, "H": H,
                                                               "C": safe_exp(log_c), "logC": log_c})
    return ConditionVerdict("eq5_10", window, FAILS, {"sigma": sigma, "rho": rho},
                            counterexample={"note": "gap grows for every H in the grid"})


def _eq5_11(w, params):
    rho = float(params.get("rho", 1.0))
    tau = float(params.get("tau", 2.0))
    K = int(params.get("kmax", 200))
    rel = check_relation(omega_sequence(w, rho, K), omega_sequence(w, tau, K), "approx")
    w6 = check_omega_condition(w, "w6")
    consistent = rel.holds == w6.holds
    notes = [] if consistent else ["scale equivalence and (w6) disagree on this window"]
    return ConditionVerdict("eq5_11", (0, K), rel.status,
                            {"rho": rho, "tau": tau, "relation": rel.witness, "w6": w6.status, "consistent": consistent},
                            notes=notes)


def _eq5_12(w, params):
    rho = float(params.get("rho", 1.0))
    K = int(params.get("kmax", 200))
    base = omega_sequence(w, rho, K)
    w8 = check_omega_condition(w, "w8")
    for C in WITNESS_POWERS[1:]:
        rel = check_relation(omega_sequence(w, rho / C, K), base, "triangleleft")
        if rel.holds:
            return ConditionVerdict("eq5_12", (0, K), HOLDS, {"rho": rho, "C": C, "w8": w8.status, "consistent": True})
    consistent = not w8.holds
    notes = [] if consistent else ["(w8) holds but no C gives Ω^(ρ/C) ◁ Ω^ρ on this window"]
    return ConditionVerdict("eq5_12", (0, K), FAILS, {"rho": rho, "w8": w8.status, "consistent": consistent},
                            counterexample={"note": "no C in the grid gives ◁"}, notes=notes)


def _eq5_13(w, params):
    """L^s φ*(t) + s L^s t <= φ*(L^s t) + sum_{i=1}^s L^i for s = 1..s_max."""
    t = np.asarray(params.get("t_grid", np.linspace(0.0, 20.0, 81)), dtype=float)
    s_max = int(params.get("s_max", 3))
    base = phi_star(w, t)
    window = (float(t[0]), float(t[-1]))
    for L in WITNESS_POWERS[:11]:
        ok = True
        for s in range(1, s_max + 1):
            Ls = L**s
            lhs = Ls * base + s * Ls * t
            rhs = phi_star(w, Ls * t) + sum(L**i for i in range(1, s + 1))
            if np.any(lhs - rhs > _tol(lhs, rhs)):
                ok = False
                break
        if ok:
            return ConditionVerdict("eq5_13", window, HOLDS, {"L": L, "s_max": s_max})
    return ConditionVerdict("eq5_13", window, FAILS, counterexample={"note": "no L in 2^0..2^10"})


_SUITE = {"eq5_2": _eq5_2, "eq5_6": _eq5_6, "eq5_10": _eq5_10, "eq5_11": _eq5_11, "eq5_12": _eq5_12, "eq5_13": _eq5_13}


def inequality_suite(w: WeightFunction, which: str, params: dict[str, Any] | None = None) -> ConditionVerdict:
    if which not in _SUITE:
        raise InputError(f"unknown inequality {which!r}", "which")
    return _SUITE[which](w, params or {})


# --------------------------------------------------------------------------
# ω_ρ and comparisons


@dataclass
class OmegaRhoResult:
    verdict: ConditionVerdict
    t_grid: np.ndarray
    omega_rho: np.ndarray
    dropped: list[float] = field(default_factory=list)


def omega_rho(w: WeightFunction, rho: float, t_grid, kmax_cap: int = 1 << 14):
    """ω_ρ = log T_{Ω^ρ} on t_grid, growing the window until no sample is truncated."""
    t = np.asarray(t_grid, dtype=float)
    kmax = 64
    while True:
        seq = omega_sequence(w, rho, kmax)
        sample = assoc_function(seq, "T", t)
        if not sample.truncated.any() or kmax >= kmax_cap:
            return sample
        kmax *= 2


def omega_rho_check(w: WeightFunction, rho: float, t_grid=None) -> OmegaRhoResult:
    """ρ ω_ρ <= ω everywhere and ω <= 2ρ ω_ρ + C on the tail."""
    t = np.geomspace(math.e, 1e3, 200) if t_grid is None else np.asarray(t_grid, dtype=float)
    sample = omega_rho(w, rho, t)
    keep = ~sample.truncated
    dropped = t[~keep].tolist()
    tt, wr = t[keep], sample.values[keep]
    om = w.omega(tt)
    upper_gap = rho * wr - om
    window = (float(t[0]), float(t[-1]))
    worst = int(np.argmax(upper_gap))
    if upper_gap[worst] > 1e-9 * (1.0 + om[worst]):
        v = ConditionVerdict("omega_rho", window, FAILS, counterexample={"t": float(tt[worst]), "gap": float(upper_gap[worst])})
        return OmegaRhoResult(v, tt, wr, dropped)
    lower_gap = om - 2.0 * rho * wr
    C = float(lower_gap.max())
    tr = tail_trend(lower_gap, np.arange(lower_gap.shape[0]))
    status = FAILS if tr == "up" else HOLDS
    v = ConditionVerdict("omega_rho", window, status, {"rho": rho, "C": C, "maxUpperGap": float(upper_gap.max()),
                                                      "trend": tr, "dropped": len(dropped)})
    return OmegaRhoResult(v, tt, wr, dropped)


def compare_weights(w: WeightFunction, v: WeightFunction, rel: str = "lesssim", log_t=None,
                    rho: float = 1.0, kmax: int = 200) -> ConditionVerdict:
    """ω ≼ σ (σ = O(ω)) or ω ◁ σ (σ = o(ω)), with the sequence-level echo Ω^ρ <= C Σ^(Hρ)."""
    if rel not in ("lesssim", "triangleleft"):
        raise InputError(f"unknown relation {rel!r}", "rel")
    u = default_log_t_grid() if log_t is None else np.asarray(log_t, dtype=float)
    tail = _tail(u)
    r = v.log_phi(tail) - w.log_phi(tail)
    tr = tail_trend(r, tail)
    window = (float(u[0]), float(u[-1]))
    if rel == "lesssim":
        ok = tr != "up"
        witness: dict[str, Any] = {"C": float(np.exp(r.max())), "trend": tr}
    else:
        ok = tr == "down"
        witness = {"lastRatio": float(np.exp(r[-1])), "trend": tr}
    k = np.arange(1, kmax + 1)
    a = _log_kf(w, rho, kmax)
    echo = None
    for H in WITNESS_POWERS:
        gap = a - _log_kf(v, H * rho, kmax)
        if tail_trend(gap[1:], k) != "up":
            echo = {"H": H, "rho": rho, "C": float(np.exp(gap.max()))}
            break
    witness["echo"] = echo
    notes = []
    if ok and echo is None:
        notes.append("relation holds on the tail but no H gives the sequence domination")
    return ConditionVerdict(f"compare_{rel}", window, HOLDS if ok else FAILS, witness,
                            counterexample=None if ok else {"trend": tr}, notes=notes)
