"""Instance files and DIMACS formulas.

Instance files are JSON objects with a ``schema`` tag and a ``kind``:

``pair``         ``P``, ``Q``; optional ``eps`` and ``speeds`` (``{"P": [[lo, hi], ...], "Q": ...}``)
``closed-pair``  ``P``, ``Q`` (both closed); optional ``eps``
``pointset``     ``P``, ``S``; optional ``eps`` and ``all_points``
``dag``          ``P``, ``vertices``, ``edges``; optional ``eps``
``curve``        ``Q``

An unbounded speed is written as the string ``"inf"``. Floats are written
in their shortest round-trip form, so a canonical file survives
``write(parse(text))`` unchanged up to whitespace.
"""
from __future__ import annotations

import json
import math
from typing import Any, Dict, List

import numpy as np

from .reduction import SatFormula

SCHEMA = "frechetlab-instance/1"
KINDS = {
    "pair": (("P", "Q"), ("eps", "speeds")),
    "closed-pair": (("P", "Q"), ("eps",)),
    "pointset": (("P", "S"), ("eps", "all_points")),
    "dag": (("P", "vertices", "edges"), ("eps",)),
    "curve": (("Q",), ()),
}
_ORDER = ("schema", "kind", "P", "Q", "S", "vertices", "edges", "eps", "all_points", "speeds")


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


def _points(doc: Dict[str, Any], key: str, dim: int = 0) -> np.ndarray:
    raw = doc[key]
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{key}: expected a list of numeric points") from exc
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 2:
        raise InputError(f"{key}: expected a non-empty list of points with at least 2 coordinates")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{key}: coordinates must be finite")
    if dim and arr.shape[1] != dim:
        raise InputError(f"{key}: expected {dim}-dimensional points, got {arr.shape[1]}")
    return arr


def _limits(raw, key: str, count: int) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != count:
        raise InputError(f"{key}: expected {count} [min, max] pairs")
    out = np.empty((count, 2))
    for i, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(f"{key}[{i}]: expected [min, max]")
        for j, x in enumerate(pair):
            if x == "inf":
                out[i, j] = math.inf
            elif isinstance(x, (int, float)) and not isinstance(x, bool):
                out[i, j] = float(x)
            else:
                raise InputError(f"{key}[{i}]: speeds must be numbers or \"inf\"")
        if not (0 <= out[i, 0] <= out[i, 1]) or math.isinf(out[i, 0]):
            raise InputError(f"{key}[{i}]: need 0 <= min <= max with finite min")
    return out


def parse_instance(text: str) -> Dict[str, Any]:
    """Parse and validate an instance document into numpy-backed fields."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"document: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise InputError("document: expected a JSON object")
    if doc.get("schema") != SCHEMA:
        raise InputError(f"schema: expected {SCHEMA!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"kind: expected one of {sorted(KINDS)}")
    required, optional = KINDS[kind]
    for key in doc:
        if key not in ("schema", "kind") + required + optional:
            raise InputError(f"{key}: unknown field for kind {kind!r}")
    for key in required:
        if key not in doc:
            raise InputError(f"{key}: missing")
    out: Dict[str, Any] = {"kind": kind}
    dim = 0
    for key in ("P", "Q", "S", "vertices"):
        if key in required:
            out[key] = _points(doc, key, dim)
            dim = out[key].shape[1]
    if "edges" in required:
        edges = doc["edges"]
        k = len(out["vertices"])
        if not isinstance(edges, list):
            raise InputError("edges: expected a list of [from, to] pairs")
        clean: List[tuple] = []
        for i, e in enumerate(edges):
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
                raise InputError(f"edges[{i}]: expected [from, to] integer pair")
            if not all(0 <= x < k for x in e):
                raise InputError(f"edges[{i}]: vertex index out of range")
            clean.append((e[0], e[1]))
        out["edges"] = clean
    if "eps" in doc:
        eps = doc["eps"]
        if not isinstance(eps, (int, float)) or isinstance(eps, bool) or not math.isfinite(eps) or eps < 0:
            raise InputError("eps: expected a finite non-negative number")
        out["eps"] = float(eps)
    if "all_points" in doc:
        if not isinstance(doc["all_points"], bool):
            raise InputError("all_points: expected true or false")
        out["all_points"] = doc["all_points"]
    if "speeds" in doc:
        sp = doc["speeds"]
        if not isinstance(sp, dict) or set(sp) != {"P", "Q"}:
            raise InputError("speeds: expected an object with keys P and Q")
        out["speeds"] = (
            _limits(sp["P"], "speeds.P", len(out["P"]) - 1),
            _limits(sp["Q"], "speeds.Q", len(out["Q"]) - 1),
        )
    return out


def _num(x: float):
    return "inf" if math.isinf(x) else float(x)


def to_document(inst: Dict[str, Any]) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"schema": SCHEMA, "kind": inst["kind"]}
    for key in _ORDER[2:]:
        if key not in inst:
            continue
        val = inst[key]
        if key in ("P", "Q", "S", "vertices"):
            doc[key] = [[float(c) for c in p] for p in np.asarray(val, float)]
        elif key == "edges":
            doc[key] = [[int(a), int(b)] for a, b in val]
        elif key == "speeds":
            doc[key] = {name: [[_num(a), _num(b)] for a, b in np.asarray(lim, float)] for name, lim in zip("PQ", val)}
        elif key == "eps":
            doc[key] = float(val)
        else:
            doc[key] = bool(val)
    return doc


def write_instance(inst: Dict[str, Any]) -> str:
    return json.dumps(to_document(inst), indent=1) + "\n"


def read_instance(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def parse_dimacs(text: str) -> SatFormula:
    """DIMACS CNF with exactly three literals per clause."""
    header = None
    lits: List[int] = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"header (line {ln}): expected 'p cnf <vars> <clauses>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise InputError(f"header (line {ln}): counts must be integers") from exc
            continue
        if header is None:
            raise InputError(f"header: missing before line {ln}")
        try:
            lits.extend(int(x) for x in line.split())
        except ValueError as exc:
            raise InputError(f"clause (line {ln}): literals must be integers") from exc
    if header is None:
        raise InputError("header: missing 'p cnf' line")
    clauses: List[tuple] = []
    cur: List[int] = []
    for x in lits:
        if x == 0:
            if len(cur) != 3:
                raise InputError(f"clause {len(clauses) + 1}: expected 3 literals, got {len(cur)}")
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    if cur:
        raise InputError(f"clause {len(clauses) + 1}: missing terminating 0")
    n_vars, n_clauses = header
    if len(clauses) != n_clauses:
        raise InputError(f"header: declares {n_clauses} clauses, found {len(clauses)}")
    try:
        return SatFormula(tuple(clauses), n_vars)
    except ValueError as exc:
        raise InputError(f"clause: {exc}") from exc


def write_dimacs(phi: SatFormula) -> str:
    lines = [f"p cnf {phi.n_vars} {phi.k}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"
