"""Tensor specification documents and report rendering.

A TensorSpec is JSON:

    {"dimension": 4, "signs": [-1, 1, 1, 1], "mode": "rational",
     "orientation": 1,
     "components": [{"indices": [1, 2, 1, 2], "value": "3/2"}, ...]}

Indices are 1-based.  Values are rational strings "p/q", integers or floats
(floats are read as decimals in rational mode).  Reports are plain dicts;
rationals are rendered exactly as "p/q" strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .curvature import CurvatureTensor, curvature_from_components
from .errors import BianchiViolation, SpecParseError, SymmetryConflict
from .exterior import MODES, RATIONAL, KForm, ScalarSpace
from .subsets import subsets


@dataclass
class TensorSpec:
    dimension: int
    signs: tuple[int, ...]
    mode: str = RATIONAL
    components: list[tuple[tuple[int, int, int, int], Any]] = field(default_factory=list)
    orientation: int = 1

    def space(self) -> ScalarSpace:
        return ScalarSpace(self.signs, self.orientation, self.mode)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "signs": list(self.signs),
            "mode": self.mode,
            "orientation": self.orientation,
            "components": [{"indices": list(idx), "value": render(v)} for idx, v in self.components],
        }


def _parse_value(raw, where: str):
    if isinstance(raw, bool):
        raise SpecParseError("value must be a number or a rational string", where)
    if isinstance(raw, (int, float)):
        return raw
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecParseError(f"cannot read {raw!r} as a rational", where) from None
    raise SpecParseError(f"unsupported value {raw!r}", where)


def parse_spec(doc: dict | str) -> TensorSpec:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SpecParseError("top level must be an object", "document")
    for key in ("dimension", "signs", "components"):
        if key not in doc:
            raise SpecParseError(f"missing field {key!r}", "document")
    n = doc["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecParseError("dimension must be a positive integer", "dimension")
    signs = doc["signs"]
    if not isinstance(signs, list) or len(signs) != n or any(s not in (-1, 1) or isinstance(s, bool) for s in signs):
        raise SpecParseError(f"signs must be a list of {n} entries, each +1 or -1", "signs")
    mode = doc.get("mode", RATIONAL)
    if mode not in MODES:
        raise SpecParseError(f"mode must be one of {MODES}", "mode")
    orientation = doc.get("orientation", 1)
    if orientation not in (-1, 1):
        raise SpecParseError("orientation must be +1 or -1", "orientation")
    comps = doc["components"]
    if not isinstance(comps, list):
        raise SpecParseError("components must be a list", "components")
    out = []
    for pos, entry in enumerate(comps):
        where = f"components[{pos}]"
        if not isinstance(entry, dict) or "indices" not in entry or "value" not in entry:
            raise SpecParseError("entry needs 'indices' and 'value'", where)
        idx = entry["indices"]
        if not isinstance(idx, list) or len(idx) != 4 or any(not isinstance(i, int) or isinstance(i, bool) for i in idx):
            raise SpecParseError("indices must be four integers", where + ".indices")
        if any(not 1 <= i <= n for i in idx):
            raise SpecParseError(f"indices must lie in [1, {n}]", where + ".indices")
        out.append((tuple(idx), _parse_value(entry["value"], where + ".value")))
    return TensorSpec(n, tuple(signs), mode, out, orientation)


def tensor_from_spec(spec: TensorSpec, mode: str | None = None) -> CurvatureTensor:
    """Build the tensor; symmetry and Bianchi failures are reported as located parse errors."""
    space = ScalarSpace(spec.signs, spec.orientation, mode or spec.mode)
    entries = [(i - 1, j - 1, k - 1, l - 1, v) for (i, j, k, l), v in spec.components]
    try:
        return curvature_from_components(space, entries)
    except SymmetryConflict as exc:
        raise SpecParseError(str(exc), "components") from None
    except BianchiViolation as exc:
        raise SpecParseError(str(exc), "components") from None


def spec_from_tensor(C: CurvatureTensor) -> TensorSpec:
    """Canonical spec: one entry per nonzero M[I, J] with rank(I) <= rank(J)."""
    sp = C.space
    pairs = subsets(sp.n, 2)
    comps = []
    for r1, (a, b) in enumerate(pairs):
        for r2 in range(r1, len(pairs)):
            v = C.matrix[r1, r2]
            if v != 0:
                c, d = pairs[r2]
                comps.append(((a + 1, b + 1, c + 1, d + 1), v))
    return TensorSpec(sp.n, sp.signs, sp.mode, comps, sp.orientation)


# --- rendering -------------------------------------------------------------------------

def render(x):
    """JSON-ready value; Fractions become "p/q" (or "p")."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, complex):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return [render(v) for v in x.tolist()] if x.dtype != object else [render(v) for v in x]
    if isinstance(x, dict):
        return {str(k): render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render(v) for v in x]
    return x


def form_terms(form: KForm) -> list[dict]:
    """Nonzero coefficients in subset-rank order, 1-based indices."""
    return [{"indices": [i + 1 for i in I], "value": render(v)} for I, v in form.terms()]


def matrix_rows(m: np.ndarray) -> list:
    return [[render(v) for v in row] for row in m]


def dump(report: dict, fmt: str = "structured") -> str:
    data = render(report)
    if fmt == "structured":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    return "\n".join(_text_lines(data, 0)) + "\n"


def _text_lines(data, depth: int) -> list[str]:
    pad = "  " * depth
    lines = []
    if isinstance(data, dict):
        for key in sorted(data):
            val = data[key]
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(val, depth + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(val)}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, depth + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(f"{pad}{_inline(data)}")
    return lines


def _flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(v, (dict, list)) for v in val)


def _inline(val) -> str:
    if isinstance(val, list):
        return "[" + ", ".join(_inline(v) for v in val) + "]"
    if isinstance(val, dict):
        return "{}"
    return str(val)
