"""Instance and report (de)serialization.

One instance is one JSON document::

    {"root": <id>, "edges": [{"child", "parent", "w", "u", "c", "r"}, ...],
     "params": {"M", "K", "N", "D"}}

Node ids may be strings or integers.  Parsing is strict: unknown fields
anywhere are rejected so typos cannot silently change an experiment, and
errors carry the offending location.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .plans import SolveReport
from .tree import InstanceError, TreeInstance, build_instance

__all__ = ["FormatError", "loads_instance", "load_instance", "dump_instance",
           "save_instance", "report_to_dict"]

_EDGE_FIELDS = {"child", "parent", "w", "u", "c", "r"}
_PARAM_FIELDS = {"M", "K", "N", "D"}


class FormatError(ValueError):
    """Malformed instance document; the message names the bad location."""


def _check_num(value, where: str, integral: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    if integral and isinstance(value, float) and not value.is_integer():
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    return value


def loads_instance(text: str) -> TreeInstance:
    """Parse one instance document from a JSON string."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    unknown = set(doc) - {"root", "edges", "params"}
    if unknown:
        raise FormatError(f"top level: unknown field {sorted(unknown)[0]!r}")
    for required in ("root", "edges"):
        if required not in doc:
            raise FormatError(f"top level: missing field {required!r}")
    if not isinstance(doc["edges"], list) or not doc["edges"]:
        raise FormatError("edges: expected a non-empty array")

    records = []
    for i, rec in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        if not isinstance(rec, dict):
            raise FormatError(f"{where}: expected an object")
        unknown = set(rec) - _EDGE_FIELDS
        if unknown:
            raise FormatError(f"{where}: unknown field {sorted(unknown)[0]!r}")
        missing = _EDGE_FIELDS - set(rec)
        if missing:
            raise FormatError(f"{where}: missing field {sorted(missing)[0]!r}")
        for fld in ("w", "u", "c"):
            _check_num(rec[fld], f"{where}.{fld}")
        _check_num(rec["r"], f"{where}.r", integral=True)
        records.append(rec)

    params = {}
    if "params" in doc:
        raw = doc["params"]
        if not isinstance(raw, dict):
            raise FormatError("params: expected an object")
        unknown = set(raw) - _PARAM_FIELDS
        if unknown:
            raise FormatError(f"params: unknown field {sorted(unknown)[0]!r}")
        for fld, val in raw.items():
            if val is not None:
                params[fld] = _check_num(val, f"params.{fld}", integral=(fld == "N"))

    try:
        return build_instance(doc["root"], records, params=params)
    except InstanceError as exc:
        raise FormatError(str(exc)) from None


def load_instance(path) -> TreeInstance:
    return loads_instance(Path(path).read_text())


def _plain(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if hasattr(x, "item"):  # numpy scalar
        return _plain(x.item())
    return x


def dump_instance(inst: TreeInstance) -> dict:
    edges = [{"child": inst.names[v], "parent": inst.names[int(inst.parent[v])],
              "w": _plain(inst.w[v]), "u": _plain(inst.u[v]),
              "c": _plain(inst.c[v]), "r": int(inst.r[v])}
             for v in inst.edges()]
    doc = {"root": inst.names[0], "edges": edges}
    params = {f: _plain(getattr(inst, f)) for f in ("M", "K", "N", "D")
              if getattr(inst, f) is not None}
    if params:
        doc["params"] = params
    return doc


def save_instance(inst: TreeInstance, path) -> None:
    Path(path).write_text(json.dumps(dump_instance(inst), indent=2) + "\n")


def report_to_dict(report: SolveReport, inst: TreeInstance | None = None) -> dict:
    """Report as a JSON-ready dict; edge ids become external labels when the
    instance is supplied."""
    label = (lambda v: inst.names[v]) if inst is not None else (lambda v: v)
    out = {"problem": report.problem, "status": report.status}
    if report.objective is not None:
        out["objective"] = _plain(report.objective)
    if report.min_path is not None:
        out["min_path"] = _plain(report.min_path)
    if report.plan is not None:
        out["upgrades"] = [label(e) for e in report.upgraded_edges()]
        out["weights"] = {str(label(e)): _plain(report.plan.weights[e])
                          for e in (inst.edges() if inst is not None
                                    else range(1, len(report.plan.weights)))}
    if report.lambda_star is not None:
        out["lambda_star"] = _plain(report.lambda_star)
    if report.k_star is not None:
        out["k_star"] = _plain(report.k_star)
    if report.witness_leaf is not None:
        out["witness_leaf"] = label(report.witness_leaf)
    out["iterations"] = report.iterations
    if report.trace is not None and hasattr(report.trace, "iterations"):
        out["trace_length"] = len(report.trace.iterations)
    elif report.trace is not None and hasattr(report.trace, "probes"):
        out["trace_length"] = len(report.trace.probes)
    out["wall_time_s"] = report.wall_time
    if report.notes:
        out["notes"] = {k: _plain(v) for k, v in report.notes.items()
                        if isinstance(v, (str, int, float, bool, Fraction))}
    return out
