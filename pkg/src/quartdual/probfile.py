"""Problem file parsing, canonicalization, and digests.

A problem file is a JSON document with fields:

    n      integer dimension
    alpha  positive number
    A, B   either {"diag": [..n numbers..]} or {"dense": [[..],..]} row-major
    c, f   arrays of n numbers

The digest hashes the canonicalized parsed content, so whitespace and key
order do not affect it.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np

from .errors import ProblemFileError
from .instance import ProblemInstance


def _as_number_list(value, name: str, n: int) -> list[float]:
    if not isinstance(value, list) or len(value) != n:
        raise ProblemFileError(f"field '{name}' must be an array of {n} numbers")
    out = []
    for j, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ProblemFileError(f"field '{name}[{j}]' must be a number")
        out.append(float(item))
    return out


def _parse_matrix(value, name: str, n: int) -> dict[str, Any]:
    if not isinstance(value, dict) or len(value) != 1:
        raise ProblemFileError(f"field '{name}' must be {{\"diag\": [...]}} or {{\"dense\": [[...], ...]}}")
    (kind, payload), = value.items()
    if kind == "diag":
        return {"diag": _as_number_list(payload, f"{name}.diag", n)}
    if kind == "dense":
        if not isinstance(payload, list) or len(payload) != n:
            raise ProblemFileError(f"field '{name}.dense' must have {n} rows")
        rows = [_as_number_list(row, f"{name}.dense[{i}]", n) for i, row in enumerate(payload)]
        return {"dense": rows}
    raise ProblemFileError(f"field '{name}' has unknown matrix form '{kind}'")


def parse_problem_text(text: str) -> dict[str, Any]:
    """Parse and canonicalize a problem document; raises ProblemFileError."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ProblemFileError("top level must be an object")
    missing = [k for k in ("n", "alpha", "A", "B", "c", "f") if k not in raw]
    if missing:
        raise ProblemFileError(f"missing fields: {', '.join(missing)}")
    n = raw["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ProblemFileError("field 'n' must be a positive integer")
    alpha = raw["alpha"]
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
        raise ProblemFileError("field 'alpha' must be a number")
    return {
        "n": n,
        "alpha": float(alpha),
        "A": _parse_matrix(raw["A"], "A", n),
        "B": _parse_matrix(raw["B"], "B", n),
        "c": _as_number_list(raw["c"], "c", n),
        "f": _as_number_list(raw["f"], "f", n),
    }


def canonical_text(canonical: dict[str, Any]) -> str:
    return json.dumps(canonical, sort_keys=True, separators=(",", ":"))


def instance_digest(canonical: dict[str, Any]) -> str:
    """Hex digest of the canonicalized problem content."""
    return hashlib.sha256(canonical_text(canonical).encode()).hexdigest()


def instance_from_canonical(canonical: dict[str, Any]) -> tuple[ProblemInstance, list[str]]:
    a = canonical["A"].get("diag", canonical["A"].get("dense"))
    b = canonical["B"].get("diag", canonical["B"].get("dense"))
    return ProblemInstance.build(a, b, canonical["alpha"], canonical["c"], canonical["f"])


def load_problem(path: str) -> tuple[ProblemInstance, str, list[str]]:
    """Read a problem file; returns (instance, digest, correction notes)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    canonical = parse_problem_text(text)
    inst, corrections = instance_from_canonical(canonical)
    return inst, instance_digest(canonical), corrections


def vector_list(arr) -> list[float]:
    return [float(x) for x in np.asarray(arr).ravel()]
