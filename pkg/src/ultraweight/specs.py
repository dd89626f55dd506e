"""Spec documents for sequences, weight functions, matrices and series.

Every spec is a JSON object with a ``kind``. On the command line the same
objects can be written as ``kind:arg,arg,key=value``; for example
``gevrey:1``, ``example36:r=4``, ``power_log:2`` or ``gevrey:0.5,1,2`` (a
matrix). A string starting with ``{`` is read as inline JSON and a string
naming an existing file is loaded from disk.
"""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .constructions import example36, log_gevrey_L
from .fdb import TruncatedSeries
from .seq_core import InputError, WeightSeq, _canonical, from_mu, make_gevrey, transform
from .weight_fn import WeightFunction, omega_sequence
from .weight_matrix import DEFAULT_RHO_GRID, WeightMatrix, explicit_matrix, gevrey_matrix, matrix_from_omega

DEFAULT_K = 100
ENV_DEFAULT_K = "ULTRAWEIGHT_DEFAULT_K"


def default_k() -> int:
    raw = os.environ.get(ENV_DEFAULT_K)
    if raw is None:
        return DEFAULT_K
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{ENV_DEFAULT_K} must be an integer (got {raw!r})", ENV_DEFAULT_K) from None
    if value < 2:
        raise InputError(f"{ENV_DEFAULT_K} must be >= 2", ENV_DEFAULT_K)
    return value


def _number(text: str) -> float:
    text = text.strip()
    if text == "e":
        return math.e
    if text == "pi":
        return math.pi
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a number: {text!r}", "spec") from None


def split_shorthand(text: str) -> tuple[str, list[str], dict[str, str]]:
    """``kind:a,b,key=v`` -> (kind, [a, b], {key: v})."""
    kind, _, rest = text.partition(":")
    positional, named = [], {}
    if rest:
        for item in rest.split(","):
            if "=" in item:
                key, _, value = item.partition("=")
                named[key.strip()] = value.strip()
            elif item.strip():
                positional.append(item.strip())
    return kind.strip(), positional, named


def load_document(text: Any) -> Any:
    """Dicts pass through; JSON strings and JSON files are decoded; other strings are shorthand."""
    if isinstance(text, dict):
        return text
    if not isinstance(text, str):
        raise InputError(f"spec must be a string or object, got {type(text).__name__}", "spec")
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON spec: {exc.msg}", "spec") from None
    if stripped.endswith(".json") and Path(stripped).is_file():
        try:
            return json.loads(Path(stripped).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {stripped}: {exc.msg}", "spec") from None
    return stripped


def _require(doc: dict, key: str, kind: str):
    if key not in doc:
        raise InputError(f"{kind} spec needs field {key!r}", key)
    return doc[key]


# --------------------------------------------------------------------------
# weight functions


def weight_from_spec(spec: Any) -> WeightFunction:
    doc = load_document(spec)
    if isinstance(doc, str):
        kind, pos, named = split_shorthand(doc)
        doc = {"kind": kind}
        if pos:
            doc["s"] = _number(pos[0])
        doc.update({k: _number(v) for k, v in named.items()})
    kind = doc.get("kind")
    if kind in ("gevrey_root", "power_log"):
        return WeightFunction(kind, (float(_require(doc, "s", kind)),))
    if kind == "linear_cutoff":
        return WeightFunction("linear_cutoff")
    if kind == "sampled":
        t = np.asarray(_require(doc, "t", kind), dtype=float)
        w = np.asarray(_require(doc, "omega", kind), dtype=float)
        return WeightFunction("sampled", (), t, w)
    raise InputError(f"unknown weight kind {kind!r}", "kind")


# --------------------------------------------------------------------------
# sequences


def _seq_shorthand(text: str, K: int) -> dict:
    kind, pos, named = split_shorthand(text)
    doc: dict[str, Any] = {"kind": kind}
    if kind == "gevrey":
        doc["s"] = _number(named.get("s", pos[0] if pos else "1"))
    elif kind == "example36":
        doc["r"] = _number(named.get("r", pos[0] if pos else "4"))
        doc["logbase"] = named.get("logbase", "e")
    elif kind in ("log_gevrey_L", "logL"):
        doc["kind"] = "log_gevrey_L"
    elif kind == "mu_table":
        doc["logmu"] = [math.log(_number(p)) for p in pos]
    elif kind == "omega_sequence":
        # omega_sequence:<weight kind>,<s>,rho=...
        weight = {"kind": pos[0]} if pos else {"kind": "linear_cutoff"}
        if len(pos) > 1:
            weight["s"] = _number(pos[1])
        doc["weight"] = weight
        doc["rho"] = _number(named.get("rho", "1"))
    else:
        raise InputError(f"unknown sequence kind {kind!r}", "kind")
    if "K" in named:
        doc["K"] = int(_number(named["K"]))
    doc.setdefault("K", K)
    return doc


def sequence_from_spec(spec: Any, K: int | None = None) -> WeightSeq:
    """Build a WeightSeq; ``K`` fills in a missing window length."""
    K = default_k() if K is None else int(K)
    doc = load_document(spec)
    if isinstance(doc, str):
        doc = _seq_shorthand(doc, K)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("sequence spec needs a 'kind'", "kind")
    kind = doc["kind"]
    kmax = int(doc.get("K", K))
    if kind == "gevrey":
        return make_gevrey(float(_require(doc, "s", kind)), kmax)
    if kind == "example36":
        return example36(float(doc.get("r", 4.0)), kmax, doc.get("logbase", "e")).M
    if kind == "log_gevrey_L":
        return log_gevrey_L(kmax)
    if kind == "omega_sequence":
        return omega_sequence(weight_from_spec(_require(doc, "weight", kind)), float(_require(doc, "rho", kind)), kmax)
    if kind == "mu_table":
        return from_mu(_require(doc, "logmu", kind))
    if kind == "scaled":
        base = sequence_from_spec(_require(doc, "base", kind), K)
        return transform(base, "scale", float(_require(doc, "rho", kind)))
    if kind == "explicit":
        values = np.asarray(_require(doc, "logM", kind), dtype=float)
        return WeightSeq(values, doc.get("label", "explicit"), _canonical({"kind": "explicit", "logM": values.tolist()}))
    raise InputError(f"unknown sequence kind {kind!r}", "kind")


# --------------------------------------------------------------------------
# matrices


def matrix_from_spec(spec: Any, K: int | None = None, validate: bool = True) -> WeightMatrix:
    K = default_k() if K is None else int(K)
    doc = load_document(spec)
    if isinstance(doc, str):
        kind, pos, named = split_shorthand(doc)
        if kind == "gevrey":
            doc = {"kind": "gevrey_matrix", "sGrid": [_number(p) for p in pos]}
        elif kind == "from_omega":
            weight = {"kind": pos[0]} if pos else {"kind": "linear_cutoff"}
            if len(pos) > 1:
                weight["s"] = _number(pos[1])
            doc = {"kind": "from_omega", "weight": weight}
            if "rho" in named:
                doc["rhoGrid"] = [_number(x) for x in named["rho"].split("/")]
        else:
            raise InputError(f"unknown matrix shorthand {kind!r}", "kind")
        if "K" in named:
            doc["K"] = int(_number(named["K"]))
    kind = doc.get("kind")
    kmax = int(doc.get("K", K))
    if kind == "gevrey_matrix":
        return gevrey_matrix(_require(doc, "sGrid", kind), kmax, validate)
    if kind == "from_omega":
        return matrix_from_omega(weight_from_spec(_require(doc, "weight", kind)),
                                 doc.get("rhoGrid", list(DEFAULT_RHO_GRID)), kmax, validate)
    if kind == "explicit":
        seqs = [sequence_from_spec(s, kmax) for s in _require(doc, "seqs", kind)]
        return explicit_matrix(_require(doc, "lambdas", kind), seqs, doc.get("label", ""), validate)
    raise InputError(f"unknown matrix kind {kind!r}", "kind")


# --------------------------------------------------------------------------
# series


def series_from_spec(spec: Any, K: int) -> TruncatedSeries:
    """``exp`` or ``poly:c0,c1,...`` (rationals such as ``1/2`` allowed), padded to order K."""
    doc = load_document(spec)
    if isinstance(doc, str):
        kind, pos, _ = split_shorthand(doc)
        doc = {"kind": kind, "coeffs": pos}
    kind = doc.get("kind")
    if kind == "exp":
        return TruncatedSeries.exp(K)
    if kind == "poly":
        coeffs = _require(doc, "coeffs", kind)
        if len(coeffs) > K + 1:
            raise InputError(f"polynomial has degree {len(coeffs) - 1} > K = {K}", "coeffs")
        try:
            values = [Fraction(str(c)) for c in coeffs]
        except (ValueError, ZeroDivisionError):
            raise InputError("polynomial coefficients must be rationals", "coeffs") from None
        return TruncatedSeries.from_values(values, K, doc.get("basepoint", "0"))
    raise InputError(f"unknown series kind {kind!r}", "kind")
