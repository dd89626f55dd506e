"""Explicit sequences: the composition-stable M(r), characteristic functions,
interpolating sequences and the log-Gevrey sequence L."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .regularize import _last_quartile_slope
from .seq_core import (
    safe_exp,
    InputError,
    WeightSeq,
    _canonical,
    check_condition,
    check_relation,
    from_mu,
    log_factorial,
    mu_of,
)


def _ceil_log(x: int, base: float) -> int:
    if base == 2.0:
        v = math.log2(x)
    elif base == 10.0:
        v = math.log10(x)
    else:
        v = math.log(x)
    return math.ceil(v - 1e-12)


@dataclass(frozen=True, eq=False)
class Example36Result:
    r: float
    k_indices: tuple[int, ...]
    logmu: np.ndarray
    M: WeightSeq
    logbase: str

    def ratio_steps(self) -> list[int]:
        """k_{i+1}/k_i as produced by the recursion."""
        ks = self.k_indices
        return [ks[i + 1] // ks[i] for i in range(len(ks) - 1)]


def _parse_logbase(logbase) -> tuple[str, float]:
    key = str(logbase)
    if key in ("e", "2.718281828459045"):
        return "e", math.e
    if key in ("2", "2.0"):
        return "2", 2.0
    if key in ("10", "10.0"):
        return "10", 10.0
    raise InputError(f"logbase must be one of e, 2, 10 (got {logbase!r})", "logbase")


def example36(r: float = 4.0, kmax: int = 400, logbase="e") -> Example36Result:
    """Composition-stable, not weakly log-convex sequence M(r).

    k_1 = 3, k_i = k_{i-1} * ceil(log(i+1)); mu_1 = mu_2 = 1, mu_{k_i} = r^{k_i}
    and mu_k = r^{k_i - 1} strictly between k_i and k_{i+1}.
    """
    if r < 4:
        raise InputError("r must be >= 4", "r")
    if kmax < 4:
        raise InputError("kmax must be >= 4", "K")
    key, base = _parse_logbase(logbase)
    ks = [3]
    i = 1
    while ks[-1] <= kmax:
        i += 1
        ks.append(ks[-1] * _ceil_log(i + 1, base))
    lr = math.log(r)
    logmu = np.zeros(kmax)
    current = None
    for k in range(1, kmax + 1):
        if k in (1, 2):
            val = 0.0
        elif k in ks:
            current = k
            val = k * lr
        else:
            val = (current - 1) * lr
        logmu[k - 1] = val
    within = tuple(k for k in ks if k <= kmax)
    spec = {"kind": "example36", "r": float(r), "K": int(kmax), "logbase": key}
    M = from_mu(logmu, kmax, label=f"M({r:g})", provenance=_canonical(spec))
    return Example36Result(float(r), within, logmu, M, key)


def log_gevrey_L(kmax: int) -> WeightSeq:
    """k! L_k = k^k (log(k+e))^(2k), L_0 = 1."""
    if kmax < 8:
        raise InputError("kmax must be >= 8", "K")
    k = np.arange(kmax + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = k * np.log(k) + 2.0 * k * np.log(np.log(k + math.e)) - log_factorial(k)
    val[0] = 0.0
    return WeightSeq(val, "L", _canonical({"kind": "log_gevrey_L", "K": int(kmax)}))


@dataclass(frozen=True, eq=False)
class CharFnResult:
    M: WeightSeq
    terms: int
    log_h: np.ndarray
    log_jfact_m: np.ndarray
    log_tail_bound: np.ndarray
    norm_rho: float
    norm_C: float
    phase: tuple[int, ...] = field(default=())

    @property
    def ratio(self) -> np.ndarray:
        return np.exp(self.log_h - self.log_jfact_m)


def characteristic_fn(M: WeightSeq, N: int | None = None, jmax: int = 20, rho: float = 4.0) -> CharFnResult:
    """h_j = sum_{k<=N} k!M_k (2 mu_k)^(j-k), the j-th derivative magnitude at 0 of
    g(t) = sum k!M_k (2 mu_k)^(-k) exp(2 i mu_k t).
    """
    N = jmax + 24 if N is None else N
    if not check_condition(M, "wlc").holds:
        raise InputError("characteristic_fn needs a weakly log-convex sequence", "M")
    if N + jmax > M.kmax or N < jmax:
        raise InputError(f"need jmax <= N and N + jmax <= kmax (N={N}, jmax={jmax}, kmax={M.kmax})", "N")
    logmu = mu_of(M)[: N + 1]
    if np.any(np.diff(logmu) < -1e-12 * (1.0 + np.abs(logmu[1:]))):
        raise InputError("mu_k must be nondecreasing", "M")
    lkf = M.log_kfact()
    k = np.arange(N + 1)
    l2mu = math.log(2.0) + logmu
    log_h = np.empty(jmax + 1)
    for j in range(jmax + 1):
        log_h[j] = logsumexp(lkf[: N + 1] + (j - k) * l2mu)
    jj = np.arange(jmax + 1)
    log_jfm = lkf[: jmax + 1]
    # terms k > N are each <= j!M_j 2^-(k-j); the geometric sum gives 2^-(N-j)
    log_tail = log_jfm - (N - jj) * math.log(2.0)
    upper = np.logaddexp(log_h, log_tail)
    log_c = float(np.max(upper - log_jfm - jj * math.log(rho)))
    return CharFnResult(M, N, log_h, log_jfm, log_tail, rho, safe_exp(log_c), tuple(int(j % 4) for j in jj))


def interpolate(L: WeightSeq, M: WeightSeq, variant: str = "lemma23"):
    """Sequences N1, N2 with L <= N1 ◁ N2 ◁ M.

    lemma23: N1 = max(sqrt(M), L); remark24: N1 = max(sqrt(M/k!), L); N2 = sqrt(N1 M).
    """
    if variant not in ("lemma23", "remark24"):
        raise InputError(f"unknown variant {variant!r}", "variant")
    pre = check_relation(L, M, "triangleleft")
    if not pre.holds:
        raise InputError("precondition L ◁ M fails on the window", "L")
    K = min(L.kmax, M.kmax)
    lm = np.asarray(M.logM[: K + 1])
    ll = np.asarray(L.logM[: K + 1])
    lf = log_factorial(np.arange(K + 1))
    slope_src = lm if variant == "lemma23" else lm + lf
    if _last_quartile_slope(slope_src) <= 0:
        raise InputError("last-quartile slope of the target must be positive", "M")
    half = 0.5 * lm if variant == "lemma23" else 0.5 * (lm - lf)
    n1 = np.maximum(half, ll)
    n2 = 0.5 * (n1 + lm)
    N1 = WeightSeq(n1, f"N1({L.label},{M.label})", f"interpolate[{variant}].N1")
    N2 = WeightSeq(n2, f"N2({L.label},{M.label})", f"interpolate[{variant}].N2")
    return N1, N2


def exp_sum_derivatives(amplitudes, frequencies, kmax: int) -> np.ndarray:
    """log |f^(k)(0)| for f(t) = sum a_i exp(b_i t) with a_i, b_i > 0."""
    a = np.log(np.asarray(amplitudes, dtype=float))
    b = np.log(np.asarray(frequencies, dtype=float))
    k = np.arange(kmax + 1)
    return logsumexp(a[None, :] + k[:, None] * b[None, :], axis=1)


def exp_sum_envelope(amplitudes, frequencies, lam: float, kmax: int) -> WeightSeq:
    """Derivative bounds on [-lam, lam] as a sequence: k! M_k >= sup |f^(k)|."""
    a = np.log(np.asarray(amplitudes, dtype=float))
    b = np.asarray(frequencies, dtype=float)
    k = np.arange(kmax + 1)
    lkf = logsumexp(a[None, :] + k[:, None] * np.log(b)[None, :] + (b * lam)[None, :], axis=1)
    return WeightSeq(lkf - log_factorial(k), "exp-sum envelope", "exp_sum_envelope")
