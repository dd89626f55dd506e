"""Command-line front end: ``ultraweight {seq,wf,matrix,construct,series,scenario} ...``.

Every command prints (or writes with --out) one JSON report
``{"manifest": ..., "verdicts": [...]}`` with verdicts sorted by check_id.
Exit status: 0 when every requested check produced a verdict (including
"fails"), 2 on malformed input, 3 on an internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import TOOL_NAME, __version__
from .constructions import characteristic_fn, example36, interpolate, log_gevrey_L
from .fdb import (
    SERIES_DEFAULT_K,
    check_fdb_property,
    check_lemma22,
    minimal_certificate,
    series_compose,
    verify_prop31_bound,
)
from .regularize import contact_ratio_diagnostic, lc_minorant
from .seq_core import (
    HOLDS,
    InputError,
    _jsonable,
    carleman_sums,
    check_condition,
    check_relation,
)
from .specs import (
    _number,
    default_k,
    load_document,
    matrix_from_spec,
    sequence_from_spec,
    series_from_spec,
    weight_from_spec,
)
from .weight_fn import (
    check_omega_condition,
    compare_weights,
    inequality_suite,
    omega_rho_check,
    omega_sequence,
    young_conjugate,
)
from .weight_matrix import check_matrix_condition, check_matrix_relation, roots_almost_increasing_matrix

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _csv_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [_number(x) for x in _csv_list(text)]


class Report:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: list[Any] = []
        self.verdicts: list[dict] = []
        self.outputs: list[str] = []
        self.tables: dict[str, tuple[list[str], list[list[Any]]]] = {}

    def add_input(self, given: Any, resolved: Any = None):
        """Record the spec as typed and the full document it resolved to."""
        self.inputs.append({"given": load_document(given), "resolved": resolved})

    def add(self, check_id: str, verdict: Any):
        body = verdict.to_dict() if hasattr(verdict, "to_dict") else dict(verdict)
        self.verdicts.append({"check_id": check_id, **_jsonable(body)})

    def table(self, name: str, header: list[str], rows: list[list[Any]]):
        self.tables[name] = (header, rows)

    def manifest(self) -> dict:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out", "csv")}
        return {
            "command": " ".join(str(x) for x in [self.args.group, getattr(self.args, "action", None)] if x),
            "inputs": self.inputs,
            "parameters": _jsonable(params),
            "toolVersion": f"{TOOL_NAME} {__version__}",
            "outputs": self.outputs,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }

    def emit(self) -> int:
        csv_dir = getattr(self.args, "csv", None)
        if csv_dir and self.tables:
            try:
                Path(csv_dir).mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise InputError(f"cannot create {csv_dir}: {exc.strerror}", "csv") from None
            for name, (header, rows) in sorted(self.tables.items()):
                path = Path(csv_dir) / f"{name}.csv"
                with path.open("w", newline="") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(header)
                    writer.writerows(rows)
                self.outputs.append(str(path))
        doc = {"manifest": self.manifest(), "verdicts": sorted(self.verdicts, key=lambda v: v["check_id"])}
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=True)
        out = getattr(self.args, "out", None)
        if out:
            try:
                Path(out).write_text(text + "\n")
            except OSError as exc:
                raise InputError(f"cannot write report to {out}: {exc.strerror}", "out") from None
        else:
            sys.stdout.write(text + "\n")
        return EXIT_OK


def _K(args) -> int:
    return args.K if args.K is not None else default_k()


# --------------------------------------------------------------------------
# seq


def cmd_seq(args) -> Report:
    rep = Report(args)
    K = _K(args)
    if args.action == "compare":
        M, N = sequence_from_spec(args.left, K), sequence_from_spec(args.right, K)
        rep.add_input(args.left, M.spec())
        rep.add_input(args.right, N.spec())
        for rel in _csv_list(args.rel):
            rep.add(f"relation:{rel}", check_relation(M, N, rel))
        return rep
    M = sequence_from_spec(args.spec, K)
    rep.add_input(args.spec, M.spec())
    if args.action == "check":
        for cond in _csv_list(args.conditions):
            if cond == "fdb":
                rep.add("condition:fdb", check_fdb_property(M))
            else:
                rep.add(f"condition:{cond}", check_condition(M, cond))
    elif args.action == "regularize":
        h = lc_minorant(M, args.flavor)
        rep.add("regularize:hull", {
            "condition": f"lc_minorant_{args.flavor}", "status": HOLDS,
            "witness": {"vertices": h.vertices.tolist(), "extreme": h.extreme.tolist(),
                        "provisional_from": h.provisional_from, "degenerate": h.degenerate},
        })
        try:
            cr = contact_ratio_diagnostic(h)
            rep.add("regularize:contact_ratios", {
                "condition": "contact_ratios", "status": cr.bounded,
                "witness": {"ratios": cr.ratios.tolist(), "shifted_ratios": cr.shifted_ratios.tolist(),
                            "lower_bounds": cr.lower_bounds.tolist()},
            })
        except InputError as exc:
            rep.add("regularize:contact_ratios", {"condition": "contact_ratios", "status": "inconclusive",
                                                  "notes": [str(exc)]})
        mask = h.is_vertex()
        rep.table("regularize", ["k", "logM", "logMbc", "contact"],
                  [[int(k), float(a), float(b), int(c)] for k, a, b, c in
                   zip(M.k, M.logM, h.regularized.logM, mask)])
    elif args.action == "fdb":
        rep.add("fdb:property", check_fdb_property(M))
        for v in check_lemma22(M).verdicts():
            rep.add(f"fdb:sufficient:{v.condition}", v)
    elif args.action == "carleman":
        partial, verdict = carleman_sums(M)
        rep.add("carleman", verdict)
        rep.table("carleman", ["k", "partial_sum"], [[i + 1, float(x)] for i, x in enumerate(partial)])
    return rep


# --------------------------------------------------------------------------
# wf


def cmd_wf(args) -> Report:
    rep = Report(args)
    w = weight_from_spec(args.omega)
    rep.add_input(args.omega, w.spec())
    K = _K(args)
    if args.action == "conjugate":
        t = np.asarray(sorted(_float_list(args.t)))
        tab = young_conjugate(w, t)
        rep.add("conjugate", {"condition": "conjugate", "status": HOLDS if not tab.truncated.any() else "inconclusive",
                              "witness": {"t": t.tolist(), "phistar": tab.phistar.tolist(), "sMax": tab.s_max,
                                          "truncated": tab.truncated.tolist()}})
        rep.table("conjugate", ["t", "phistar", "argmax", "truncated"],
                  [[float(a), float(b), float(c), int(d)] for a, b, c, d in
                   zip(tab.t_grid, tab.phistar, tab.argmax, tab.truncated)])
    elif args.action == "sequences":
        for rho in _float_list(args.rho):
            seq = omega_sequence(w, rho, K)
            rep.add(f"sequence:rho={rho:g}:wlc", check_condition(seq, "wlc"))
            rep.add(f"sequence:rho={rho:g}", {"condition": "omega_sequence", "status": HOLDS,
                                              "witness": {"spec": seq.spec(), "logM": seq.logM.tolist()}})
    elif args.action == "check":
        for cond in _csv_list(args.conditions):
            rep.add(f"condition:{cond}", check_omega_condition(w, cond))
    elif args.action == "inequalities":
        params = {"kmax": K}
        for key in ("sigma", "tau"):
            if getattr(args, key) is not None:
                params[key] = getattr(args, key)
        for rho in _float_list(args.rho):
            for which in _csv_list(args.which):
                rep.add(f"inequality:{which}:rho={rho:g}", inequality_suite(w, which, dict(params, rho=rho)))
    elif args.action == "omegarho":
        for rho in _float_list(args.rho):
            rep.add(f"omegarho:rho={rho:g}", omega_rho_check(w, rho).verdict)
    elif args.action == "compare":
        v = weight_from_spec(args.other)
        rep.add_input(args.other, v.spec())
        rep.add(f"compare:{args.rel}", compare_weights(w, v, args.rel))
    return rep


# --------------------------------------------------------------------------
# matrix / construct / series


def cmd_matrix(args) -> Report:
    rep = Report(args)
    K = _K(args)
    X = matrix_from_spec(args.matrix, K)
    rep.add_input(args.matrix, X.spec)
    if args.action == "check":
        for cond in _csv_list(args.cond):
            flavors = ["roumieu", "beurling"] if args.flavor == "both" else [args.flavor]
            for flavor in flavors:
                if cond == "roots_ai":
                    rep.add(f"matrix:roots_ai:{flavor}", roots_almost_increasing_matrix(X, flavor))
                else:
                    rep.add(f"matrix:{cond}:{flavor}", check_matrix_condition(X, cond, flavor))
    else:
        Y = matrix_from_spec(args.other, K)
        rep.add_input(args.other, Y.spec)
        for rel in _csv_list(args.rel):
            rep.add(f"matrix_relation:{rel}", check_matrix_relation(X, Y, rel))
    return rep


def cmd_construct(args) -> Report:
    rep = Report(args)
    K = _K(args)
    if args.action == "example36":
        res = example36(args.r, K, args.logbase)
        rep.add("example36", {"condition": "example36", "status": HOLDS, "witness": {
            "spec": res.M.spec(), "kIndices": list(res.k_indices), "logbase": res.logbase,
            "ratioSteps": res.ratio_steps()}, "notes": [f"log base in the index recursion: {res.logbase}"]})
        for cond in ("wlc", "dc"):
            rep.add(f"example36:{cond}", check_condition(res.M, cond))
    elif args.action == "charfn":
        M = sequence_from_spec(args.spec, max(K, args.terms + args.orders))
        rep.add_input(args.spec, M.spec())
        res = characteristic_fn(M, args.terms, args.orders)
        lower_ok = bool(np.all(res.log_h >= res.log_jfact_m))
        rep.add("charfn", {"condition": "charfn_lower_bound", "status": HOLDS if lower_ok else "fails",
                           "witness": {"normRho": res.norm_rho, "normC": res.norm_C, "terms": res.terms}})
        rep.table("charfn", ["j", "log_hj", "log_jfactMj", "ratio"],
                  [[j, float(a), float(b), float(r)] for j, (a, b, r) in
                   enumerate(zip(res.log_h, res.log_jfact_m, res.ratio))])
    elif args.action == "interpolate":
        L, M = sequence_from_spec(args.left, K), sequence_from_spec(args.right, K)
        rep.add_input(args.left, L.spec())
        rep.add_input(args.right, M.spec())
        N1, N2 = interpolate(L, M, args.variant)
        rep.add("interpolate:N1<N2", check_relation(N1, N2, "triangleleft"))
        rep.add("interpolate:N2<M", check_relation(N2, M, "triangleleft"))
        rep.table("interpolate", ["k", "logN1", "logN2"],
                  [[int(k), float(a), float(b)] for k, a, b in zip(N1.k, N1.logM, N2.logM)])
    elif args.action == "logL":
        L = log_gevrey_L(K)
        partial, verdict = carleman_sums(L)
        rep.add("logL:carleman", verdict)
        rep.add("logL:spec", {"condition": "log_gevrey_L", "status": HOLDS, "witness": {"spec": L.spec()}})
    return rep


def cmd_series(args) -> Report:
    rep = Report(args)
    K = args.K if args.K is not None else SERIES_DEFAULT_K
    f, g = series_from_spec(args.f, K), series_from_spec(args.g, K)
    rep.add_input(args.f, f.to_strings())
    rep.add_input(args.g, g.to_strings())
    if args.action == "compose":
        h = series_compose(f, g)
        rep.add("compose", {"condition": "compose", "status": HOLDS, "witness": {"h": h.to_strings()}})
    else:
        M = sequence_from_spec(args.M, max(K, 2))
        rep.add_input(args.M, M.spec())
        cf, cg = minimal_certificate(f, M, args.rho_f), minimal_certificate(g, M, args.rho_g)
        v = verify_prop31_bound(f, cf, g, cg)
        rep.add("verify-fdb", v)
        rep.table("verify_fdb", ["k", "margin"], [[k, m] for k, m in v.diagnostics])
    return rep


def cmd_scenario(args) -> Report:
    from .scenarios import SCENARIOS, run_scenario

    if args.name not in SCENARIOS:
        raise InputError(f"unknown scenario {args.name!r}; choose from {', '.join(sorted(SCENARIOS))}", "name")
    rep = Report(args)
    for res in run_scenario(args.name, seed=args.seed):
        rep.add(f"criterion:{res.number:02d}", res.to_dict())
    return rep


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=TOOL_NAME, description="Check weight sequences, weight functions and weight matrices.")
    p.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    groups = p.add_subparsers(dest="group", required=True)

    def common(sp):
        sp.add_argument("--K", type=int, default=None, help="window length (default $ULTRAWEIGHT_DEFAULT_K or 100)")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--csv", help="directory for CSV tables")

    seq = groups.add_parser("seq", help="weight sequences").add_subparsers(dest="action", required=True)
    sp = seq.add_parser("check")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--conditions", default="lc,wlc,mg,dc")
    common(sp)
    sp = seq.add_parser("compare")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--rel", default="lesssim")
    common(sp)
    sp = seq.add_parser("regularize")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--flavor", choices=["weak", "strong"], default="weak")
    common(sp)
    for name in ("fdb", "carleman"):
        sp = seq.add_parser(name)
        sp.add_argument("--spec", required=True)
        common(sp)

    wf = groups.add_parser("wf", help="weight functions").add_subparsers(dest="action", required=True)
    for name in ("conjugate", "sequences", "check", "inequalities", "omegarho", "compare"):
        sp = wf.add_parser(name)
        sp.add_argument("--omega", required=True)
        common(sp)
        if name == "conjugate":
            sp.add_argument("--t", required=True, help="comma list of t values (e and pi allowed)")
        if name in ("sequences", "inequalities", "omegarho"):
            sp.add_argument("--rho", default="1")
        if name == "check":
            sp.add_argument("--conditions", default="w1,w2,w3,w4,w5,w6,w7,w8")
        if name == "inequalities":
            sp.add_argument("--which", default="eq5_2,eq5_6,eq5_10,eq5_11,eq5_12,eq5_13")
            sp.add_argument("--sigma", type=float, default=None)
            sp.add_argument("--tau", type=float, default=None)
        if name == "compare":
            sp.add_argument("--other", required=True)
            sp.add_argument("--rel", choices=["lesssim", "triangleleft"], default="lesssim")

    mx = groups.add_parser("matrix", help="weight matrices").add_subparsers(dest="action", required=True)
    sp = mx.add_parser("check")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--cond", required=True)
    sp.add_argument("--flavor", choices=["roumieu", "beurling", "both"], default="roumieu")
    common(sp)
    sp = mx.add_parser("relate")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--other", required=True)
    sp.add_argument("--rel", required=True)
    common(sp)

    cs = groups.add_parser("construct", help="explicit constructions").add_subparsers(dest="action", required=True)
    sp = cs.add_parser("example36")
    sp.add_argument("--r", type=float, default=4.0)
    sp.add_argument("--logbase", default="e")
    common(sp)
    sp = cs.add_parser("charfn")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--terms", type=int, default=44)
    sp.add_argument("--orders", type=int, default=20)
    common(sp)
    sp = cs.add_parser("interpolate")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--variant", choices=["lemma23", "remark24"], default="lemma23")
    common(sp)
    sp = cs.add_parser("logL")
    common(sp)

    se = groups.add_parser("series", help="truncated power series").add_subparsers(dest="action", required=True)
    for name in ("compose", "verify-fdb"):
        sp = se.add_parser(name)
        sp.add_argument("--f", required=True)
        sp.add_argument("--g", required=True)
        common(sp)
        if name == "verify-fdb":
            sp.add_argument("--M", required=True)
            sp.add_argument("--rho-f", dest="rho_f", type=float, default=1.0)
            sp.add_argument("--rho-g", dest="rho_g", type=float, default=1.0)

    sc = groups.add_parser("scenario", help="bundled acceptance batteries")
    sc.add_argument("name")
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--out")
    sc.add_argument("--csv")
    return p


COMMANDS = {"seq": cmd_seq, "wf": cmd_wf, "matrix": cmd_matrix, "construct": cmd_construct,
            "series": cmd_series, "scenario": cmd_scenario}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.group](args)
        return report.emit()
    except InputError as exc:
        sys.stderr.write(f"error: {exc} (field: {exc.field})\n")
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
