"""Sampled weight matrices {M^λ}, the matrix condition battery and matrix relations.

Λ is a finite increasing sample. Every "∃μ" ranges over that sample; a matrix
built from a generator may also carry a ``factory`` that produces members at
λ·2^(±i) when the sample runs out in the required direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import kernels
from .fdb import fdb_closure
from .regularize import _last_quartile_slope, lc_minorant
from .seq_core import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    ConditionVerdict,
    InputError,
    WeightSeq,
    _gap_condition,
    check_condition,
    check_relation,
    make_gevrey,
    tail_trend,
)
from .weight_fn import WeightFunction, omega_sequence

FACTORY_STEPS = 8
DEFAULT_RHO_GRID = tuple(2.0**i for i in range(-3, 7))
DEFAULT_S_GRID = tuple(0.25 * i for i in range(1, 13))
DEFAULT_L_RHOS = (2.0, 10.0)
MATRIX_CONDITIONS = ("H", "Cw_beurling", "Cw_roumieu", "dc", "mg", "alg", "FdB", "L", "BR")
MATRIX_RELATIONS = ("lesssim_beurling", "lesssim_roumieu", "triangleleft_roumieu", "lesssim_mixed")


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    lambdas: np.ndarray
    seqs: tuple[WeightSeq, ...]
    label: str = ""
    factory: Callable[[float], WeightSeq] | None = None
    spec: dict | None = None

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.ndim != 1 or lam.shape[0] == 0 or lam.shape[0] != len(self.seqs):
            raise InputError("lambdas and seqs must be nonempty and of equal length", "lambdas")
        if np.any(np.diff(lam) <= 0):
            raise InputError("lambdas must be strictly increasing", "lambdas")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "seqs", tuple(self.seqs))

    def __len__(self):
        return len(self.seqs)

    def member(self, lam: float) -> WeightSeq:
        hit = np.nonzero(self.lambdas == lam)[0]
        if hit.size:
            return self.seqs[int(hit[0])]
        if self.factory is None:
            raise InputError(f"lambda {lam} not sampled and no generator", "lambda")
        return self.factory(lam)

    def validate(self) -> "WeightMatrix":
        for lam, M in zip(self.lambdas, self.seqs):
            if abs(M.logM[0]) > 1e-12:
                raise InputError(f"M_0 != 1 for lambda={lam:g}", "seqs")
            v = check_condition(M, "wlc")
            if not v.holds:
                raise InputError(f"member lambda={lam:g} is not weakly log-convex (k={v.counterexample['k']})", "seqs")
            if _last_quartile_slope(M.log_kfact()) <= 0:
                raise InputError(f"member lambda={lam:g} has nonpositive last-quartile slope", "seqs")
        for i in range(len(self.seqs) - 1):
            a, b = self.seqs[i].logM, self.seqs[i + 1].logM
            n = min(a.shape[0], b.shape[0])
            bad = np.nonzero(a[:n] > b[:n] + 1e-12 * (1.0 + np.abs(b[:n])))[0]
            if bad.size:
                raise InputError(f"members not ordered: lambda={self.lambdas[i]:g} exceeds the next at k={int(bad[0])}", "seqs")
        return self


def explicit_matrix(lambdas, seqs, label: str = "", validate: bool = True) -> WeightMatrix:
    X = WeightMatrix(np.asarray(lambdas, dtype=float), tuple(seqs), label,
                     spec={"kind": "explicit", "lambdas": [float(x) for x in lambdas],
                           "seqs": [s.spec() or s.provenance for s in seqs]})
    return X.validate() if validate else X


def matrix_from_omega(w: WeightFunction, rho_grid=DEFAULT_RHO_GRID, kmax: int = 200, validate: bool = True) -> WeightMatrix:
    rho = np.asarray(rho_grid, dtype=float)
    if np.any(rho <= 0):
        raise InputError("rhoGrid must be positive", "rhoGrid")
    seqs = tuple(omega_sequence(w, float(r), kmax) for r in rho)
    X = WeightMatrix(rho, seqs, f"W[{w.label}]", lambda r: omega_sequence(w, r, kmax),
                     {"kind": "from_omega", "weight": w.spec(), "rhoGrid": rho.tolist(), "K": int(kmax)})
    return X.validate() if validate else X


def gevrey_matrix(s_grid=DEFAULT_S_GRID, kmax: int = 200, validate: bool = True) -> WeightMatrix:
    s = np.asarray(s_grid, dtype=float)
    if np.any(s <= 0):
        raise InputError("sGrid must be positive", "sGrid")
    X = WeightMatrix(s, tuple(make_gevrey(float(x), kmax) for x in s), "G", lambda x: make_gevrey(x, kmax),
                     {"kind": "gevrey_matrix", "sGrid": s.tolist(), "K": int(kmax)})
    return X.validate() if validate else X


# --------------------------------------------------------------------------
# pairwise tests: each returns something with .holds and a witness


def _common(a: WeightSeq, b: WeightSeq):
    n = min(a.kmax, b.kmax) + 1
    return np.asarray(a.logM[:n]), np.asarray(b.logM[:n])


def _pair_dc(small: WeightSeq, big: WeightSeq) -> ConditionVerdict:
    """small_{k+1} <= C^k big_k."""
    a, b = _common(small, big)
    k = np.arange(1, a.shape[0] - 1)
    return _gap_condition("dc", (a[k + 1] - b[k]) / k, k, lambda m: {"k": m}, (0, a.shape[0] - 1))


def _pair_mg(top: WeightSeq, parts: WeightSeq) -> ConditionVerdict:
    """top_{j+k} <= C^{j+k} parts_j parts_k."""
    a, b = _common(top, parts)
    conv, arg = kernels.maxplus_conv(np.ascontiguousarray(-b), np.ascontiguousarray(-b), 0)
    n = np.arange(1, a.shape[0])
    return _gap_condition("mg", (a[n] + conv[n]) / n, n, lambda m: {"j": int(arg[m]), "k": int(m - arg[m])},
                          (0, a.shape[0] - 1))


def _pair_alg(parts: WeightSeq, top: WeightSeq) -> ConditionVerdict:
    """parts_j parts_k <= C^{j+k} top_{j+k}."""
    a, b = _common(parts, top)
    conv, arg = kernels.maxplus_conv(np.ascontiguousarray(a), np.ascontiguousarray(a), 0)
    n = np.arange(1, a.shape[0])
    return _gap_condition("alg", (conv[n] - b[n]) / n, n, lambda m: {"j": int(arg[m]), "k": int(m - arg[m])},
                          (0, a.shape[0] - 1))


def _pair_fdb(inner: WeightSeq, outer: WeightSeq, cache: dict) -> ConditionVerdict:
    """(inner)° ≼ outer, with the single constant C = exp max_k (log inner°_k - log outer_k)/k."""
    key = id(inner)
    if key not in cache:
        cache[key] = (inner, fdb_closure(inner))
    closure = cache[key][1]
    a, b = _common(closure, outer)
    k = np.arange(1, a.shape[0])
    return _gap_condition("FdB", (a[k] - b[k]) / k, k, lambda m: {"k": m}, (0, a.shape[0] - 1))


def _pair_L(small: WeightSeq, big: WeightSeq, rho: float) -> ConditionVerdict:
    """rho^k small_k <= C big_k."""
    a, b = _common(small, big)
    k = np.arange(a.shape[0])
    return _gap_condition("L", k * math.log(rho) + a - b, k, lambda m: {"k": m}, (0, a.shape[0] - 1))


def _pair_roots(a_seq: WeightSeq, b_seq: WeightSeq) -> ConditionVerdict:
    """(a_j)^(1/j) <= C (b_k)^(1/k) for 1 <= j <= k."""
    a, b = _common(a_seq, b_seq)
    k = np.arange(1, a.shape[0])
    ra = np.maximum.accumulate(a[1:] / k)
    return _gap_condition("roots_ai", ra - b[1:] / k, k, lambda m: {"k": m}, (0, a.shape[0] - 1))


# --------------------------------------------------------------------------
# quantifier resolution


@dataclass
class _Assignment:
    lam: float
    mu: float | None
    source: str
    witness: dict[str, Any] = field(default_factory=dict)


def _candidates(X: WeightMatrix, i: int, direction: str, use_factory: bool):
    lam = float(X.lambdas[i])
    if direction == "up":
        for j in range(i + 1, len(X)):
            yield float(X.lambdas[j]), X.seqs[j], "sampled"
    else:
        for j in range(i - 1, -1, -1):
            yield float(X.lambdas[j]), X.seqs[j], "sampled"
    if use_factory and X.factory is not None:
        for m in range(1, FACTORY_STEPS + 1):
            mu = lam * 2.0**m if direction == "up" else lam * 2.0**-m
            yield mu, X.factory(mu), "generated"
    yield lam, X.seqs[i], "self"


def _forall_exists(X: WeightMatrix, direction: str, test, use_factory: bool = True):
    rows: list[_Assignment] = []
    for i in range(len(X)):
        found = None
        for mu, seq, source in _candidates(X, i, direction, use_factory):
            v = test(X.seqs[i], seq)
            if v.holds:
                found = _Assignment(float(X.lambdas[i]), mu, source, _witness_of(v))
                break
        rows.append(found or _Assignment(float(X.lambdas[i]), None, "none"))
    return rows


def _witness_of(v) -> dict:
    w = dict(v.witness)
    w.pop("argmax", None)
    return w


def _assignment_verdict(name: str, flavor: str, X: WeightMatrix, rows: list[_Assignment], extra_notes=()) -> ConditionVerdict:
    window = (0, min(s.kmax for s in X.seqs))
    table = [{"lambda": r.lam, "mu": r.mu, "source": r.source, **r.witness} for r in rows]
    missing = [r.lam for r in rows if r.mu is None]
    notes = list(extra_notes)
    cond = f"{name}_{flavor}"
    if not missing:
        return ConditionVerdict(cond, window, HOLDS, {"assignments": table}, notes=notes)
    if len(X) == 1 and X.factory is None:
        notes.append("singleton matrix without a generator: no admissible mu other than lambda")
        return ConditionVerdict(cond, window, INCONCLUSIVE, {"assignments": table}, notes=notes)
    notes.append("no sampled witness mu for some lambda")
    return ConditionVerdict(cond, window, FAILS, {"assignments": table},
                            counterexample={"lambdas_without_mu": missing}, notes=notes)


def _root_trend(M: WeightSeq) -> str:
    k = np.arange(1, M.kmax + 1)
    return tail_trend(M.logM[1:] / k, k)


def check_matrix_condition(X: WeightMatrix, cond: str, flavor: str = "roumieu",
                           l_rhos=DEFAULT_L_RHOS) -> ConditionVerdict:
    """Decide one matrix condition; ∀λ∃μ is resolved over the sample (plus generated members)."""
    if cond not in MATRIX_CONDITIONS:
        raise InputError(f"unknown matrix condition {cond!r}", "cond")
    if flavor not in ("roumieu", "beurling"):
        raise InputError(f"unknown flavor {flavor!r}", "flavor")
    window = (0, min(s.kmax for s in X.seqs))
    if cond in ("H", "Cw_beurling", "Cw_roumieu"):
        trends = {float(lam): _root_trend(M) for lam, M in zip(X.lambdas, X.seqs)}
        if cond == "H":
            ok = all(t != "down" for t in trends.values())
        elif cond == "Cw_beurling":
            ok = all(t == "up" for t in trends.values())
        else:
            ok = any(t != "down" for t in trends.values())
        return ConditionVerdict(cond, window, HOLDS if ok else FAILS, {"rootTrends": trends},
                                notes=["flavor does not apply to this condition"])
    up = flavor == "roumieu"
    direction = "up" if up else "down"
    if cond == "dc":
        test = (lambda lam, mu: _pair_dc(lam, mu)) if up else (lambda lam, mu: _pair_dc(mu, lam))
    elif cond == "mg":
        test = (lambda lam, mu: _pair_mg(lam, mu)) if up else (lambda lam, mu: _pair_mg(mu, lam))
    elif cond == "alg":
        test = (lambda lam, mu: _pair_alg(lam, mu)) if up else (lambda lam, mu: _pair_alg(mu, lam))
    elif cond == "FdB":
        cache: dict = {}
        test = (lambda lam, mu: _pair_fdb(lam, mu, cache)) if up else (lambda lam, mu: _pair_fdb(mu, lam, cache))
    elif cond == "BR":
        test = (lambda lam, mu: check_relation(lam, mu, "triangleleft")) if up else \
            (lambda lam, mu: check_relation(mu, lam, "triangleleft"))
    else:
        rows_by_rho = {}
        for rho in l_rhos:
            t = (lambda lam, mu, r=rho: _pair_L(lam, mu, r)) if up else (lambda lam, mu, r=rho: _pair_L(mu, lam, r))
            rows_by_rho[rho] = _forall_exists(X, direction, t)
        per_rho = [_assignment_verdict("L", flavor, X, rows) for rows in rows_by_rho.values()]
        ok = all(v.holds for v in per_rho)
        status = HOLDS if ok else (INCONCLUSIVE if all(v.status != FAILS for v in per_rho) else FAILS)
        return ConditionVerdict(f"L_{flavor}", window, status,
                                {"byRho": {str(r): v.witness["assignments"] for r, v in zip(rows_by_rho, per_rho)}})
    return _assignment_verdict(cond, flavor, X, _forall_exists(X, direction, test))


# --------------------------------------------------------------------------
# relations between matrices


def _first(candidates, test):
    for mu, seq in candidates:
        v = test(seq)
        if v.holds:
            return mu, v
    return None, None


def check_matrix_relation(X: WeightMatrix, Y: WeightMatrix, rel: str) -> ConditionVerdict:
    """Matrix relations resolved over the sampled grids only (no generated members)."""
    if rel not in MATRIX_RELATIONS:
        raise InputError(f"unknown matrix relation {rel!r}", "rel")
    window = (0, min(s.kmax for s in X.seqs + Y.seqs))
    xs = list(zip(X.lambdas.tolist(), X.seqs))
    ys = list(zip(Y.lambdas.tolist(), Y.seqs))
    table = []
    if rel == "lesssim_beurling":
        # for every λ of Y some μ of X has X^μ ≼ Y^λ; largest admissible μ wins
        for lam, N in ys:
            mu, v = _first(reversed(xs), lambda M, N=N: check_relation(M, N, "lesssim"))
            table.append({"lambda": lam, "mu": mu, **(v.witness if v else {})})
        ok = all(r["mu"] is not None for r in table)
    elif rel == "lesssim_roumieu":
        for lam, M in xs:
            mu, v = _first(ys, lambda N, M=M: check_relation(M, N, "lesssim"))
            table.append({"lambda": lam, "mu": mu, **(v.witness if v else {})})
        ok = all(r["mu"] is not None for r in table)
    elif rel == "triangleleft_roumieu":
        for lam, M in xs:
            for mu, N in ys:
                v = check_relation(M, N, "triangleleft")
                table.append({"lambda": lam, "mu": mu, "status": v.status, "tailRootRatio": v.witness["tailRootRatio"]})
        ok = all(r["status"] == HOLDS for r in table)
    else:
        for lam, M in xs:
            mu, v = _first(ys, lambda N, M=M: check_relation(M, N, "lesssim"))
            if mu is not None:
                table.append({"lambda": lam, "mu": mu, **v.witness})
                break
        ok = bool(table)
    status = HOLDS if ok else FAILS
    notes = [] if ok else ["no sampled witness on the given grids"]
    return ConditionVerdict(rel, window, status, {"assignments": table}, notes=notes)


def roots_almost_increasing_matrix(X: WeightMatrix, flavor: str = "roumieu", regularize: bool = False) -> ConditionVerdict:
    """(M^λ_j)^(1/j) <= C (M^μ_k)^(1/k) for j <= k (roumieu), or with λ and μ swapped (beurling).

    For each λ the sampled μ (in the flavor's direction, or λ itself) with the
    smallest C is kept. With ``regularize`` every member is replaced by its
    weak log-convex minorant first.
    """
    if flavor not in ("roumieu", "beurling"):
        raise InputError(f"unknown flavor {flavor!r}", "flavor")
    seqs = [lc_minorant(M, "weak").regularized for M in X.seqs] if regularize else list(X.seqs)
    lams = X.lambdas.tolist()
    window = (0, min(s.kmax for s in seqs))
    table = []
    for i, lam in enumerate(lams):
        cands = range(i, len(lams)) if flavor == "roumieu" else range(i, -1, -1)
        best = None
        for j in cands:
            v = _pair_roots(seqs[i], seqs[j]) if flavor == "roumieu" else _pair_roots(seqs[j], seqs[i])
            if v.holds and (best is None or v.witness["logC"] < best[1].witness["logC"]):
                best = (lams[j], v)
        if best is None:
            table.append({"lambda": lam, "mu": None})
        else:
            table.append({"lambda": lam, "mu": best[0], "C": best[1].witness["C"], "logC": best[1].witness["logC"]})
    ok = all(r["mu"] is not None for r in table)
    witness: dict[str, Any] = {"assignments": table, "regularized": regularize}
    notes = []
    dc = check_matrix_condition(X, "dc", flavor)
    if dc.holds and not regularize:
        fdb = check_matrix_condition(X, "FdB", flavor)
        witness["FdB"] = fdb.status
        witness["consistent"] = fdb.holds == ok
        if fdb.holds != ok:
            notes.append("roots condition and FdB condition disagree on this window")
    return ConditionVerdict(f"roots_ai_{flavor}", window, HOLDS if ok else FAILS, witness,
                            counterexample=None if ok else {"lambdas_without_mu": [r["lambda"] for r in table if r["mu"] is None]},
                            notes=notes)
