"""Log-domain weight sequences, relations between them and the basic conditions.

A weight sequence ``M = (M_0, ..., M_K)`` is stored as ``logM[k] = ln M_k``.
Asymptotic statements are decided on the stored window only; every verdict
carries the witness or counterexample that makes it re-checkable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.special import gammaln

from . import kernels

#: first index used when fitting the geometric factor of a two-constant bound
K0_ROOTS = 5
#: minimal overlapping window for relation checks
MIN_RELATION_WINDOW = 16
#: an octave-to-octave change must keep at least this fraction of the previous one
#: to count as a persistent (divergent) trend
TREND_PERSISTENCE = 0.75
#: changes below this size (log units) count as flat
TREND_FLOOR = 1e-6
#: reported, not decisive: root ratios below this count as "numerically small"
EPS_TAIL = 1e-3

HOLDS = "holds-on-window"
FAILS = "fails"
CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"


class InputError(ValueError):
    """Invalid user input; ``field`` names the offending spec field."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


def safe_exp(x: float) -> float:
    """exp that saturates to inf instead of raising."""
    return math.exp(x) if x < 709.0 else math.inf


def log_factorial(k):
    """ln k! for scalar or array ``k``."""
    return gammaln(np.asarray(k, dtype=float) + 1.0)


def _canonical(spec: dict) -> str:
    return json.dumps(spec, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True, eq=False)
class WeightSeq:
    """Positive sequence ``M_0..M_kmax`` stored as natural logarithms.

    ``provenance`` is the canonical JSON of the generating spec (or free text
    for derived sequences); it is what lets closed-form certificates apply.
    """

    logM: np.ndarray
    label: str = ""
    provenance: str = ""

    def __post_init__(self):
        arr = np.array(self.logM, dtype=float)
        if arr.ndim != 1:
            raise InputError("logM must be one-dimensional", "logM")
        if arr.shape[0] < 2:
            raise InputError("window too short: need kmax >= 1", "logM")
        if not np.all(np.isfinite(arr)):
            raise InputError("logM entries must be finite", "logM")
        arr.setflags(write=False)
        object.__setattr__(self, "logM", arr)

    @property
    def kmax(self) -> int:
        return self.logM.shape[0] - 1

    @property
    def k(self) -> np.ndarray:
        return np.arange(self.kmax + 1)

    def log_kfact(self) -> np.ndarray:
        """ln(k! M_k)."""
        return self.logM + log_factorial(self.k)

    def spec(self) -> dict | None:
        """The generating spec, when the provenance is one."""
        try:
            out = json.loads(self.provenance)
        except (json.JSONDecodeError, TypeError):
            return None
        return out if isinstance(out, dict) else None

    def truncate(self, kmax: int) -> "WeightSeq":
        return WeightSeq(self.logM[: kmax + 1], self.label, self.provenance)

    def __repr__(self) -> str:
        return f"WeightSeq({self.label or '?'}, kmax={self.kmax})"


@dataclass
class ConditionVerdict:
    condition: str
    window: tuple[int, int]
    status: str
    witness: dict[str, Any] = field(default_factory=dict)
    counterexample: dict[str, Any] | None = None
    diagnostics: list[tuple[int, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    conclusion: str | None = None

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS, CERTIFIED)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "window": list(self.window),
            "status": self.status,
            "conclusion": self.conclusion,
            "witness": _jsonable(self.witness),
            "counterexample": _jsonable(self.counterexample),
            "notes": list(self.notes),
        }


@dataclass
class RelationVerdict:
    relation: str
    window: tuple[int, int]
    status: str
    root_ratio: np.ndarray
    sup_estimate: float
    tail_estimate: float
    witness: dict[str, Any] = field(default_factory=dict)
    trend: str = "flat"
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "window": list(self.window),
            "status": self.status,
            "sup_estimate": self.sup_estimate,
            "tail_estimate": self.tail_estimate,
            "trend": self.trend,
            "witness": _jsonable(self.witness),
            "notes": list(self.notes),
        }


def _jsonable(obj):
    if obj is None:
        return None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


# --------------------------------------------------------------------------
# generators and transforms


def make_gevrey(s: float, kmax: int) -> WeightSeq:
    """G^s_k = (k!)^s."""
    if s < 0:
        raise InputError("Gevrey exponent must be >= 0", "s")
    if kmax < 2:
        raise InputError("kmax must be >= 2", "K")
    s = float(s)
    k = np.arange(kmax + 1)
    return WeightSeq(s * log_factorial(k), f"G^{s:g}", _canonical({"kind": "gevrey", "s": s, "K": int(kmax)}))


def from_mu(logmu: Sequence[float], kmax: int | None = None, label: str = "", provenance: str = "") -> WeightSeq:
    """Sequence with ``k! M_k = mu_1 ... mu_k`` from ``logmu = [log mu_1, ..., log mu_kmax]``."""
    logmu = np.asarray(logmu, dtype=float)
    if kmax is not None and logmu.shape[0] != kmax:
        raise InputError(f"logmu has {logmu.shape[0]} entries, expected {kmax}", "logmu")
    if not np.all(np.isfinite(logmu)):
        raise InputError("logmu entries must be finite", "logmu")
    k = np.arange(logmu.shape[0] + 1)
    logm = np.concatenate([[0.0], np.cumsum(logmu)]) - log_factorial(k)
    logm[0] = 0.0
    if not provenance:
        provenance = _canonical({"kind": "mu_table", "logmu": logmu.tolist()})
    return WeightSeq(logm, label, provenance)


def mu_of(M: WeightSeq) -> np.ndarray:
    """log mu_k = log((k+1) M_{k+1} / M_k) for 0 <= k < kmax."""
    if M.kmax < 2:
        raise InputError("kmax must be >= 2", "K")
    k = np.arange(M.kmax)
    return np.log(k + 1.0) + M.logM[1:] - M.logM[:-1]


def _binary(M: WeightSeq, N: WeightSeq):
    K = min(M.kmax, N.kmax)
    return M.logM[: K + 1], N.logM[: K + 1]


def transform(M: WeightSeq, op: str, arg: Any = None) -> WeightSeq:
    """scale(rho), shift_plus_one, pointwise_max(N), geo_mean(N) or sqrt, in log domain."""
    if op == "scale":
        rho = float(arg)
        if not rho > 0:
            raise InputError("rho must be > 0", "rho")
        out = M.logM + M.k * math.log(rho)
        return WeightSeq(out, f"{M.label}^{rho:g}", _scaled_provenance(M, rho))
    if op == "shift_plus_one":
        if M.kmax < 2:
            raise InputError("kmax must be >= 2 to shift", "K")
        return WeightSeq(M.logM[1:], f"{M.label}^+1", f"shift_plus_one({M.provenance})")
    if op == "sqrt":
        return WeightSeq(0.5 * M.logM, f"sqrt({M.label})", f"sqrt({M.provenance})")
    if op in ("pointwise_max", "geo_mean"):
        if not isinstance(arg, WeightSeq):
            raise InputError(f"{op} needs a second sequence", "arg")
        a, b = _binary(M, arg)
        if op == "pointwise_max":
            return WeightSeq(np.maximum(a, b), f"max({M.label},{arg.label})", f"max({M.provenance},{arg.provenance})")
        return WeightSeq(0.5 * (a + b), f"sqrt({M.label}*{arg.label})", f"geo_mean({M.provenance},{arg.provenance})")
    raise InputError(f"unknown transform {op!r}", "op")


def _scaled_provenance(M: WeightSeq, rho: float) -> str:
    base = M.spec()
    if base is None:
        return f"scaled({M.provenance},{rho!r})"
    return _canonical({"kind": "scaled", "base": base, "rho": rho})


# --------------------------------------------------------------------------
# trend classification on a window


def _octave_medians(values: np.ndarray, idx: np.ndarray):
    K = int(idx[-1])
    bands = [(K // 8, K // 4), (K // 4, K // 2), (K // 2, K + 1)]
    meds = []
    for lo, hi in bands:
        sel = values[(idx >= max(lo, 1)) & (idx < hi)]
        if sel.size == 0:
            return None
        meds.append(float(np.median(sel)))
    return meds


def tail_trend(values: np.ndarray, idx: np.ndarray | None = None) -> str:
    """Classify the tail of ``values`` as ``"up"``, ``"down"`` or ``"flat"``.

    The medians over the octaves [K/8, K/4), [K/4, K/2) and [K/2, K] are
    compared. A move of the last octave counts as divergence when it keeps at
    least ``TREND_PERSISTENCE`` of the previous octave's move in the same
    direction, so that convergent transients such as ``c + A/k`` (which halve
    per octave) read as flat while ``log k``-type and faster growth does not.
    """
    values = np.asarray(values, dtype=float)
    idx = np.arange(values.shape[0]) if idx is None else np.asarray(idx)
    meds = _octave_medians(values, idx)
    if meds is None:
        return "flat"
    d0 = meds[1] - meds[0]
    d1 = meds[2] - meds[1]
    floor = TREND_FLOOR * (1.0 + abs(meds[2]))
    tail = values[idx >= idx[-1] - max(2, (idx[-1] - idx[0]) // 5)]
    slope = np.polyfit(np.arange(tail.shape[0]), tail, 1)[0] if tail.shape[0] >= 2 else 0.0
    if d1 > floor and d1 >= TREND_PERSISTENCE * d0 and slope >= 0:
        return "up"
    if -d1 > floor and -d1 >= TREND_PERSISTENCE * (-d0) and slope <= 0:
        return "down"
    return "flat"


# --------------------------------------------------------------------------
# relations


def _lesssim_witness(lm: np.ndarray, ln: np.ndarray):
    k = np.arange(lm.shape[0])
    roots = (lm[1:] - ln[1:]) / k[1:]
    start = min(K0_ROOTS, roots.shape[0]) - 1
    log_rho = float(np.max(roots[start:]))
    log_c = float(np.max(lm - ln - k * log_rho))
    return log_rho, log_c


def check_relation(M: WeightSeq, N: WeightSeq, rel: str) -> RelationVerdict:
    """Decide M ≼ N, M ◁ N or M ≈ N on the common window."""
    if rel not in ("lesssim", "triangleleft", "approx"):
        raise InputError(f"unknown relation {rel!r}", "rel")
    lm, ln = _binary(M, N)
    K = lm.shape[0] - 1
    k = np.arange(1, K + 1)
    log_root = (lm[1:] - ln[1:]) / k
    sup_est = float(np.max(log_root))
    n_tail = max(1, K // 5)
    tail_est = float(np.median(log_root[-n_tail:]))
    window = (0, K)
    if K < MIN_RELATION_WINDOW:
        return RelationVerdict(rel, window, INCONCLUSIVE, np.exp(log_root), sup_est, tail_est,
                               notes=[f"window {K} shorter than {MIN_RELATION_WINDOW}"])
    trend = tail_trend(log_root, k)
    notes = []
    witness: dict[str, Any] = {}
    if rel == "lesssim":
        log_rho, log_c = _lesssim_witness(lm, ln)
        witness = {"C": safe_exp(log_c), "rho": safe_exp(log_rho), "logC": log_c, "logRho": log_rho}
        status = FAILS if trend == "up" else HOLDS
        if status == FAILS:
            notes.append("root ratio grows persistently across octaves")
    elif rel == "triangleleft":
        status = HOLDS if trend == "down" else FAILS
        witness = {"tailRootRatio": safe_exp(tail_est), "belowEpsTail": bool(safe_exp(tail_est) < EPS_TAIL)}
        if status == FAILS:
            notes.append("root ratio does not decrease persistently across octaves")
    else:
        fwd = check_relation(M, N, "lesssim")
        bwd = check_relation(N, M, "lesssim")
        status = HOLDS if (fwd.holds and bwd.holds) else FAILS
        witness = {"forward": fwd.witness, "backward": bwd.witness}
        trend = fwd.trend
    with np.errstate(over="ignore"):
        root_ratio = np.exp(log_root)
    return RelationVerdict(rel, window, status, root_ratio, sup_est, tail_est, witness, trend, notes)


# --------------------------------------------------------------------------
# conditions


def _rounding_tol(*arrays) -> np.ndarray:
    return 1e-12 * (1.0 + sum(np.abs(a) for a in arrays))


def _log_convexity(y: np.ndarray, name: str, label: str) -> ConditionVerdict:
    K = y.shape[0] - 1
    lhs = 2.0 * y[1:-1]
    rhs = y[:-2] + y[2:]
    bad = np.nonzero(lhs > rhs + _rounding_tol(y[:-2], y[1:-1], y[2:]))[0]
    window = (0, K)
    if bad.size:
        k = int(bad[0]) + 1
        return ConditionVerdict(name, window, FAILS, counterexample={
            "k": k, "lhs_log": float(lhs[k - 1]), "rhs_log": float(rhs[k - 1]),
            "inequality": f"2*log{label}[k] <= log{label}[k-1] + log{label}[k+1]"})
    return ConditionVerdict(name, window, HOLDS, witness={"checked": K - 1})


def _gap_condition(name: str, per_k: np.ndarray, idx: np.ndarray, argmax_info, window) -> ConditionVerdict:
    """Shared logic for conditions of the form ``per_k[n] <= log C`` for all n."""
    finite = np.isfinite(per_k)
    per_k, idx = per_k[finite], idx[finite]
    log_c = float(np.max(per_k))
    diag = list(zip(idx.tolist(), per_k.tolist()))
    witness = {"C": safe_exp(log_c), "logC": log_c, "argmax": argmax_info(int(idx[np.argmax(per_k)]))}
    if tail_trend(per_k, idx) != "up":
        return ConditionVerdict(name, window, HOLDS, witness=witness, diagnostics=diag)
    half = idx <= idx[-1] // 2
    log_c_half = float(np.max(per_k[half])) if half.any() else -math.inf
    later = np.nonzero((~half) & (per_k > log_c_half))[0]
    if later.size == 0:
        return ConditionVerdict(name, window, HOLDS, witness=witness, diagnostics=diag,
                                notes=["tail trend up but no violation of the half-window constant"])
    n = int(idx[later[0]])
    return ConditionVerdict(name, window, FAILS, witness=witness, diagnostics=diag, counterexample={
        "index": n, "logC_first_half": log_c_half, "value": float(per_k[later[0]]),
        "detail": argmax_info(n)}, notes=["witness constant keeps growing with the window"])


def check_condition(M: WeightSeq, cond: str) -> ConditionVerdict:
    """lc, wlc, mg, dc, ai or roots_ai on the window of ``M``."""
    if M.kmax < 3:
        raise InputError("kmax must be >= 3", "K")
    y = M.logM
    K = M.kmax
    window = (0, K)
    if cond == "lc":
        return _log_convexity(y, "lc", "M")
    if cond == "wlc":
        return _log_convexity(M.log_kfact(), "wlc", "kfM")
    if cond == "mg":
        conv, arg = kernels.maxplus_conv(-y, -y, 1)
        n = np.arange(2, K + 1)
        per = (y[n] + conv[n]) / n
        return _gap_condition("mg", per, n, lambda m: {"j": int(arg[m]), "k": int(m - arg[m])}, window)
    if cond == "dc":
        k = np.arange(1, K)
        per = (y[k + 1] - y[k]) / k
        return _gap_condition("dc", per, k, lambda m: {"k": m}, window)
    if cond == "ai":
        return _almost_increasing(y, np.arange(K + 1), "ai", window)
    if cond == "roots_ai":
        k = np.arange(1, K + 1)
        return _almost_increasing(y[1:] / k, k, "roots_ai", window)
    raise InputError(f"unknown condition {cond!r}", "cond")


def _almost_increasing(v: np.ndarray, idx: np.ndarray, name: str, window) -> ConditionVerdict:
    run = np.maximum.accumulate(v)
    per = run - v

    def where(m):
        pos = int(np.searchsorted(idx, m))
        return {"j": int(idx[int(np.argmax(v[: pos + 1]))]), "k": m}

    return _gap_condition(name, per, idx, where, window)


# --------------------------------------------------------------------------
# Carleman sums


def _closed_form_family(M: WeightSeq):
    """(family, params) when the provenance is a builtin closed form, else None."""
    spec = M.spec()
    while spec is not None and spec.get("kind") == "scaled":
        spec = spec.get("base")
    if spec is None:
        return None
    kind = spec.get("kind")
    if kind == "gevrey":
        return "gevrey", float(spec["s"])
    if kind == "log_gevrey_L":
        return "log_gevrey_L", None
    if kind == "omega_sequence":
        w = spec.get("weight", {})
        if w.get("kind") == "power_log":
            return "power_log", float(w["s"])
    return None


_CERTIFICATES = {
    ("gevrey", 0): ("divergent", "(k!)^(1/k) <= k, so (k!M_k)^(-1/k) >= 1/k: harmonic comparison"),
    ("gevrey", 1): ("convergent", "k! >= (k/e)^k, so (k!)^(-(1+s)/k) <= (e/k)^(1+s): p-series with p = 1+s > 1"),
    ("log_gevrey_L", 1): ("convergent", "(k!L_k)^(-1/k) = 1/(k (log(k+e))^2) <= 1/(k (log k)^2): integral test"),
    ("power_log", 1): ("convergent", "omega = (log t)^p gives phi*(t) = (p-1)(t/p)^(p/(p-1)), so "
                                      "(k!Omega_k)^(-1/k) = exp(-c k^(1/(p-1))) eventually: stretched-exponential comparison"),
}


def carleman_sums(M: WeightSeq, ratio_form: bool = True):
    """Partial sums of (k! M_k)^(-1/k) and a verdict on their divergence."""
    if M.kmax < 16:
        raise InputError("kmax must be >= 16", "K")
    k = np.arange(1, M.kmax + 1)
    log_terms = -M.log_kfact()[1:] / k
    partial = np.cumsum(np.exp(log_terms))
    window = (1, M.kmax)
    diags = list(zip(k.tolist(), partial.tolist()))
    family = _closed_form_family(M)
    notes: list[str] = []
    witness: dict[str, Any] = {"partialSum": float(partial[-1])}
    if ratio_form and check_condition(M, "wlc").holds:
        mu = mu_of(M)
        witness["ratioFormPartialSum"] = float(np.sum(np.exp(-mu)))
    if family is not None:
        name, param = family
        if name == "gevrey":
            conclusion, cert = _CERTIFICATES[("gevrey", 0 if param == 0 else 1)]
        else:
            conclusion, cert = _CERTIFICATES[(name, 1)]
        witness["certificate"] = cert
        return partial, ConditionVerdict("carleman", window, CERTIFIED, witness, diagnostics=diags, conclusion=conclusion)
    trend = tail_trend(np.log(np.maximum(np.exp(log_terms) * k, 1e-300)), k)
    witness["termTimesKTrend"] = trend
    notes.append("no closed-form certificate; k*term trend reported as a diagnostic only")
    return partial, ConditionVerdict("carleman", window, INCONCLUSIVE, witness, diagnostics=diags, notes=notes)
