"""JSON serialisation for groups, actions, algebra elements, irreps and reports.

Complex numbers are written as ``[re, im]`` pairs. Element indices follow the
canonical orderings of :mod:`qdouble.groups`, so files are reproducible.
Schemas are listed in ``docs/schemas.md``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import InputError
from .groups import FiniteGroup, GroupIrrep, from_cayley_table, from_name
from .report import Check, Report
from .reps import InducedIrrep
from .tga import AlgElement, GAction, make_action


def dumps(obj: Any) -> str:
    """Deterministic JSON text (fixed key order from construction, two-space indent)."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_to_json(M: np.ndarray) -> list:
    return [[_complex_pair(z) for z in row] for row in np.asarray(M)]


def _matrix_from_json(rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("matrix entries must be [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise InputError("matrix entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


# ---------------------------------------------------------------------------
# groups and actions

def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "cayley": G.cayley.tolist()}


def group_from_json(data: dict) -> FiniteGroup:
    if not isinstance(data, dict) or "cayley" not in data:
        raise InputError("group JSON needs a 'cayley' table")
    extra = set(data) - {"name", "order", "cayley"}
    if extra:
        raise InputError(f"unknown group JSON fields {sorted(extra)}")
    G = from_cayley_table(data["cayley"], str(data.get("name", "")))
    if "order" in data and data["order"] != G.order:
        raise InputError(f"declared order {data['order']} does not match table size {G.order}")
    return G


def load_group(path: str | Path) -> FiniteGroup:
    return group_from_json(read_json(path))


def resolve_group(name: str | None = None, path: str | Path | None = None) -> FiniteGroup:
    if (name is None) == (path is None):
        raise InputError("give exactly one of a group name or a group file")
    return from_name(name) if path is None else load_group(path)


def action_to_json(action: GAction) -> dict:
    return {"name": action.name, "setSize": action.set_size, "table": action.act.tolist()}


def action_from_json(G: FiniteGroup, data: dict) -> GAction:
    """Action table with rows indexed by group elements: ``table[g][xi] = g . xi``."""
    if not isinstance(data, dict) or "table" not in data:
        raise InputError("action JSON needs a 'table'")
    extra = set(data) - {"name", "setSize", "table"}
    if extra:
        raise InputError(f"unknown action JSON fields {sorted(extra)}")
    action = make_action(G, data["table"], str(data.get("name", "")))
    if "setSize" in data and data["setSize"] != action.set_size:
        raise InputError(f"declared set size {data['setSize']} does not match table width {action.set_size}")
    return action


# ---------------------------------------------------------------------------
# algebra elements and irreps

def element_to_json(F: AlgElement) -> dict:
    xs, gs = np.nonzero(F.coeffs)
    coeffs = [[int(x), int(g), float(F.coeffs[x, g].real), float(F.coeffs[x, g].imag)] for x, g in zip(xs, gs)]
    return {"action": F.action.name, "coeffs": coeffs}


def element_from_json(action: GAction, data: dict) -> AlgElement:
    c = np.zeros(action.shape, dtype=complex)
    for entry in data.get("coeffs", []):
        if len(entry) != 4:
            raise InputError("coefficient entries are [xIdx, gIdx, re, im]")
        x, g, re, im = entry
        if not (0 <= int(x) < action.set_size and 0 <= int(g) < action.group.order):
            raise InputError(f"coefficient index {(x, g)} out of range")
        c[int(x), int(g)] += complex(re, im)
    return AlgElement(action, c)


def irrep_to_json(rep: GroupIrrep) -> dict:
    return {"group": getattr(rep.group, "name", ""), "label": rep.label, "degree": rep.degree,
            "matrices": [_matrix_to_json(M) for M in rep.matrices]}


def irrep_matrices_from_json(data: dict) -> np.ndarray:
    mats = _matrix_from_json(data["matrices"])
    d = int(data["degree"])
    if mats.ndim != 3 or mats.shape[1:] != (d, d):
        raise InputError(f"irrep matrices must be {d}x{d}")
    return mats


def irrep_row(rep: InducedIrrep, matrices: bool = False) -> dict:
    row = {
        "label": [int(rep.label[0]), int(rep.label[1])],
        "orbitRepresentative": int(rep.orbit.base_point),
        "orbitSize": len(rep.orbit),
        "centralizerOrder": rep.orbit.stabilizer.order,
        "alphaLabel": int(rep.alpha.label),
        "alphaDegree": rep.alpha.degree,
        "dimension": rep.dimension,
    }
    if matrices:
        B = rep.basis_matrices
        row["basisMatrices"] = [[_matrix_to_json(B[x, g]) for g in range(B.shape[1])] for x in range(B.shape[0])]
    return row


def irrep_table(action: GAction, reps: Sequence[InducedIrrep], matrices: bool = False) -> dict:
    total = sum(r.dimension ** 2 for r in reps)
    expected = action.set_size * action.group.order
    return {
        "group": action.group.name,
        "action": action.name,
        "groupOrder": action.group.order,
        "setSize": action.set_size,
        "irreps": [irrep_row(r, matrices) for r in reps],
        "sumOfSquares": total,
        "expected": expected,
        "pass": total == expected,
    }


# ---------------------------------------------------------------------------
# reports

def report_from_json(data: dict) -> Report:
    try:
        checks = [Check(c["id"], c["maxDeviation"], c["pass"]) for c in data["checks"]]
        return Report(data["suite"], data["group"], data.get("mode", ""), checks)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed report JSON: {exc}") from exc


def parse_label(text: str) -> tuple[int, int]:
    """``"xi,alpha"`` to a label tuple."""
    parts = text.replace("(", "").replace(")", "").split(",")
    try:
        a, b = (int(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"irrep label must look like 'xi,alpha', got {text!r}") from exc
    return a, b


def parse_floats(text: str, count: int) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected {count} comma-separated numbers, got {text!r}") from exc
    if len(vals) != count:
        raise InputError(f"expected {count} comma-separated numbers, got {len(vals)}")
    return vals
