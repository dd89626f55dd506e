"""Faà di Bruno closure, the FdB-property checks and exact series composition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .seq_core import (
    safe_exp,
    FAILS,
    HOLDS,
    ConditionVerdict,
    InputError,
    WeightSeq,
    check_condition,
    tail_trend,
)

ORACLE_MAX_K = 30
SERIES_DEFAULT_K = 20
SERIES_MAX_K = 30
SERIES_ORACLE_MAX_K = 25


@dataclass(frozen=True, eq=False)
class ClosureTable:
    """DP output: the closure plus enough to rebuild a maximizing partition."""

    closure: WeightSeq
    best_j: np.ndarray
    choice: np.ndarray

    def partition(self, k: int) -> tuple[int, tuple[int, ...]]:
        """(j, parts) attaining M°_k; ties go to the smallest j, then smallest first part."""
        if k == 0:
            return 0, ()
        j = int(self.best_j[k])
        parts = []
        n, left = k, j
        while left >= 1:
            a = int(self.choice[n, left])
            parts.append(a)
            n -= a
            left -= 1
        return j, tuple(parts)


def fdb_table(M: WeightSeq) -> ClosureTable:
    if M.kmax < 2:
        raise InputError("kmax must be >= 2", "K")
    out, bj, choice = kernels.fdb_table(np.ascontiguousarray(M.logM))
    seq = WeightSeq(out, f"{M.label}°", f"fdb_closure({M.provenance})")
    return ClosureTable(seq, bj, choice)


def fdb_closure(M: WeightSeq) -> WeightSeq:
    """M°_k = max M_j M_{a_1}...M_{a_j} over a_1+...+a_j = k, with M°_0 = 1."""
    return fdb_table(M).closure


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as nonincreasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def fdb_closure_oracle(M: WeightSeq, kmax_small: int) -> WeightSeq:
    """Brute force over integer partitions (order does not change the product)."""
    if kmax_small > ORACLE_MAX_K:
        raise InputError(f"oracle capped at k <= {ORACLE_MAX_K}", "kmax_small")
    if kmax_small > M.kmax:
        raise InputError("kmax_small exceeds the window", "kmax_small")
    y = M.logM
    out = np.zeros(kmax_small + 1)
    for k in range(1, kmax_small + 1):
        out[k] = max(y[len(p)] + sum(y[a] for a in p) for p in integer_partitions(k))
    return WeightSeq(out, f"{M.label}°(oracle)", f"fdb_closure_oracle({M.provenance})")


def check_fdb_property(M: WeightSeq, closure: WeightSeq | None = None) -> ConditionVerdict:
    """M° ≼ M with the single constant C = exp max_k (log M°_k - log M_k)/k."""
    if M.kmax < 4:
        raise InputError("kmax must be >= 4", "K")
    closure = fdb_closure(M) if closure is None else closure
    k = np.arange(1, M.kmax + 1)
    per = (closure.logM[1:] - M.logM[1:]) / k
    log_c = float(per.max())
    window = (0, M.kmax)
    witness = {"C": safe_exp(log_c), "logC": log_c, "argmax_k": int(k[int(per.argmax())])}
    diag = list(zip(k.tolist(), per.tolist()))
    if tail_trend(per, k) == "up":
        half = k <= M.kmax // 2
        log_c_half = float(per[half].max())
        later = np.nonzero((~half) & (per > log_c_half))[0]
        if later.size:
            kk = int(k[later[0]])
            return ConditionVerdict("FdB", window, FAILS, witness, counterexample={
                "k": kk, "logC_first_half": log_c_half, "value": float(per[later[0]])},
                diagnostics=diag, notes=["(M°_k/M_k)^(1/k) keeps growing"])
    return ConditionVerdict("FdB", window, HOLDS, witness, diagnostics=diag)


@dataclass
class SufficientConditionsReport:
    log_convex: ConditionVerdict
    derivation_closed_roots: ConditionVerdict
    product_bound: ConditionVerdict
    fdb: ConditionVerdict
    consistent: bool
    notes: list[str] = field(default_factory=list)

    def verdicts(self) -> list[ConditionVerdict]:
        return [self.log_convex, self.derivation_closed_roots, self.product_bound, self.fdb]


def _product_bound_scan(M: WeightSeq) -> ConditionVerdict:
    """M_j M_k <= M_1 M_{j+k-1} for all j, k >= 1 with j + k <= kmax + 1."""
    y = np.ascontiguousarray(M.logM)
    K = M.kmax
    # pad so that index n = j + k runs to K + 1
    pad = np.concatenate([y, [-np.inf]])
    conv, arg = kernels.maxplus_conv(pad, pad, 1)
    n = np.arange(2, K + 2)
    rhs = y[1] + y[n - 1]
    lhs = conv[n]
    bad = np.nonzero(lhs > rhs + 1e-12 * (1.0 + np.abs(lhs) + np.abs(rhs)))[0]
    window = (1, K)
    if bad.size:
        m = int(n[bad[0]])
        j = int(arg[m])
        return ConditionVerdict("product_bound", window, FAILS, counterexample={
            "j": j, "k": m - j, "lhs_log": float(lhs[bad[0]]), "rhs_log": float(rhs[bad[0]])})
    return ConditionVerdict("product_bound", window, HOLDS,
                            witness={"minSlack": float(np.min(rhs - lhs))})


def check_lemma22(M: WeightSeq, tol: float = 1e-9) -> SufficientConditionsReport:
    """The three sufficient conditions for the FdB property, each cross-checked against the DP."""
    if M.kmax < 4:
        raise InputError("kmax must be >= 4", "K")
    lc = check_condition(M, "lc")
    dc = check_condition(M, "dc")
    rai = check_condition(M, "roots_ai")
    both = HOLDS if (dc.holds and rai.holds) else FAILS
    second = ConditionVerdict("dc_and_roots_ai", (0, M.kmax), both,
                              witness={"dc": dc.witness, "roots_ai": rai.witness},
                              counterexample=None if both == HOLDS else (dc.counterexample or rai.counterexample))
    third = _product_bound_scan(M)
    fdb = check_fdb_property(M)
    notes = []
    consistent = True
    if (lc.holds or second.holds or third.holds) and not fdb.holds:
        consistent = False
        notes.append("a sufficient condition holds but the FdB check does not")
    if lc.holds:
        cap = max(math.exp(M.logM[1]), 1.0) * (1.0 + tol)
        if fdb.witness["C"] > cap:
            consistent = False
            notes.append(f"FdB witness {fdb.witness['C']} exceeds max(M_1, 1) = {cap}")
    return SufficientConditionsReport(lc, second, third, fdb, consistent, notes)


# --------------------------------------------------------------------------
# exact truncated series


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor coefficients a_0..a_K (exact rationals) of a function at a basepoint."""

    coeffs: tuple[Fraction, ...]
    basepoint: str = "0"

    def __post_init__(self):
        cs = tuple(_frac(c) for c in self.coeffs)
        if len(cs) < 2:
            raise InputError("order must be >= 1", "coeffs")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_values(cls, values: Sequence, order: int | None = None, basepoint: str = "0") -> "TruncatedSeries":
        vals = [_frac(v) for v in values]
        if order is not None:
            vals = (vals + [Fraction(0)] * (order + 1))[: order + 1]
        return cls(tuple(vals), basepoint)

    @classmethod
    def exp(cls, order: int) -> "TruncatedSeries":
        return cls(tuple(Fraction(1, math.factorial(k)) for k in range(order + 1)), "0")

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def _mul_trunc(a: list[Fraction], b: list[Fraction], K: int) -> list[Fraction]:
    out = [Fraction(0)] * (K + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(0, K + 1 - i):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of f∘g, with f expanded at g(x0): Horner on g - g(x0)."""
    if f.order != g.order:
        raise InputError(f"order mismatch: {f.order} vs {g.order}", "K")
    K = f.order
    if K > SERIES_MAX_K:
        raise InputError(f"order capped at {SERIES_MAX_K}", "K")
    dg = [Fraction(0)] + list(g.coeffs[1:])
    acc = [Fraction(0)] * (K + 1)
    for fj in reversed(f.coeffs):
        acc = _mul_trunc(acc, dg, K)
        acc[0] += fj
    return TruncatedSeries(tuple(acc), g.basepoint)


def series_compose_oracle(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Faà di Bruno sum: h_k = sum_j f_j sum over compositions of k into j parts of prod g_a.

    Compositions are grouped by their underlying partition and counted by the
    multinomial coefficient j! / prod(m_i!).
    """
    if f.order != g.order:
        raise InputError(f"order mismatch: {f.order} vs {g.order}", "K")
    K = f.order
    if K > SERIES_ORACLE_MAX_K:
        raise InputError(f"oracle capped at K <= {SERIES_ORACLE_MAX_K}", "K")
    out = [f.coeffs[0]]
    for k in range(1, K + 1):
        total = Fraction(0)
        for p in integer_partitions(k):
            j = len(p)
            if f.coeffs[j] == 0:
                continue
            mult = math.factorial(j)
            for part in set(p):
                mult //= math.factorial(p.count(part))
            prod = Fraction(mult)
            for a in p:
                prod *= g.coeffs[a]
            total += f.coeffs[j] * prod
        out.append(total)
    return TruncatedSeries(tuple(out), g.basepoint)


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """|a_k| <= C rho^k M_k on the series window."""

    C: float
    rho: float
    M: WeightSeq


def _log_abs(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def certificate_margin(series: TruncatedSeries, cert: BoundCertificate) -> float:
    """min_k (log C + k log rho + log M_k - log|a_k|); >= 0 means the certificate holds."""
    if cert.M.kmax < series.order:
        raise InputError("certificate sequence shorter than the series", "M")
    worst = math.inf
    for k, a in enumerate(series.coeffs):
        worst = min(worst, math.log(cert.C) + k * math.log(cert.rho) + cert.M.logM[k] - _log_abs(a))
    return worst


def minimal_certificate(series: TruncatedSeries, M: WeightSeq, rho: float = 1.0) -> BoundCertificate:
    """Smallest C with |a_k| <= C rho^k M_k for the given rho (floored at a tiny positive C)."""
    if M.kmax < series.order:
        raise InputError("sequence shorter than the series", "M")
    logs = [_log_abs(a) - k * math.log(rho) - M.logM[k] for k, a in enumerate(series.coeffs)]
    log_c = max(logs)
    return BoundCertificate(safe_exp(log_c) if math.isfinite(log_c) else 1e-300, rho, M)


def verify_prop31_bound(f: TruncatedSeries, cert_f: BoundCertificate,
                        g: TruncatedSeries, cert_g: BoundCertificate, tol: float = 1e-12) -> ConditionVerdict:
    """|h_k| <= C_f C_g rho_f (rho_g (1 + rho_f C_g))^k M°_k for h = f∘g and 1 <= k <= K."""
    if cert_f.M is not cert_g.M and not np.array_equal(cert_f.M.logM, cert_g.M.logM):
        raise InputError("certificates must reference the same sequence", "M")
    for name, s, c in (("f", f, cert_f), ("g", g, cert_g)):
        if certificate_margin(s, c) < -tol:
            raise InputError(f"certificate for {name} fails re-verification", name)
    h = series_compose(f, g)
    K = h.order
    closure = fdb_closure(cert_f.M.truncate(max(K, 2)))
    sigma = cert_g.rho * (1.0 + cert_f.rho * cert_g.C)
    log_front = math.log(cert_f.C) + math.log(cert_g.C) + math.log(cert_f.rho)
    margins = []
    for k in range(1, K + 1):
        bound = log_front + k * math.log(sigma) + closure.logM[k]
        margins.append((k, bound - _log_abs(h.coeffs[k])))
    finite = [m for _, m in margins if math.isfinite(m)]
    min_margin = min(finite) if finite else math.inf
    witness = {"sigma": sigma, "C_front": safe_exp(log_front), "minMargin": min_margin,
               "h": h.to_strings()}
    window = (1, K)
    bad = [(k, m) for k, m in margins if m < -tol]
    if bad:
        k, m = bad[0]
        return ConditionVerdict("composition_bound", window, FAILS, witness, counterexample={"k": k, "margin": m},
                                diagnostics=margins)
    return ConditionVerdict("composition_bound", window, HOLDS, witness, diagnostics=margins)


def composition_constants(cert_f: BoundCertificate, cert_g: BoundCertificate, fdb_c: float) -> dict:
    """Constants for composing inside a class with FdB witness ``fdb_c``.

    The composite has coefficients bounded by ``front * (fdb_c * sigma)^k M_k``.
    """
    sigma = cert_g.rho * (1.0 + cert_f.rho * cert_g.C)
    return {"sigma": sigma, "front": cert_f.C * cert_g.C * cert_f.rho, "rho_composite": fdb_c * sigma}
