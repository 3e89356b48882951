"""JSON interchange for fans, TR functions and function pairs.

Canonical form: sorted keys, no whitespace, lists for vectors.  Parsing a
canonical document and serialising it again reproduces the same bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import lattice as la
from .errors import ParseError, SchemaError
from .fan import WeightedFan
from .trop import TRFunction


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str, float)):
        return obj
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(x) for x in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, WeightedFan):
        return fan_to_json(obj)
    if isinstance(obj, TRFunction):
        return function_to_json(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None


def _int_list(value: Any, field: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError("expected a list of integers", field=field)
    return value


def _require(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", field=where)
    if key not in obj:
        raise ParseError("missing key", field=f"{where}.{key}" if where else key)
    return obj[key]


# --- fans --------------------------------------------------------------------


def fan_from_json(obj: Any, *, normalize_rays: bool = False) -> WeightedFan:
    n = _require(obj, "n", "")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("n must be a positive integer", field="n")
    raw_rays = _require(obj, "rays", "")
    cones = _require(obj, "cones", "")
    weights = _int_list(_require(obj, "weights", ""), "weights")
    if not isinstance(raw_rays, list) or not isinstance(cones, list):
        raise ParseError("expected a list", field="rays" if not isinstance(raw_rays, list) else "cones")
    rays = []
    for i, r in enumerate(raw_rays):
        r = _int_list(r, f"rays[{i}]")
        if len(r) != n:
            raise SchemaError("dimension", f"ray {i} has {len(r)} coordinates, expected {n}")
        if not any(r):
            raise SchemaError("nonzero", f"ray {i} is zero")
        if la.content(r) != 1:
            if not normalize_rays:
                raise SchemaError("primitive", f"ray {i} = {r} is not primitive")
            r = list(la.primitive(r))
        rays.append(tuple(r))
    if len(set(rays)) != len(rays):
        raise SchemaError("distinct", "rays repeat (after normalisation)")
    for i, c in enumerate(cones):
        c = _int_list(c, f"cones[{i}]")
        if not c or any(not 0 <= j < len(rays) for j in c):
            raise SchemaError("ray-index", f"cone {i} refers to a missing ray")
    dim = obj.get("dim") if isinstance(obj, dict) else None
    F = WeightedFan.build(n, rays, cones, weights, dim=dim)
    if len(F.facets) != len(F.weights):
        raise SchemaError("weights", f"{len(F.weights)} weights for {len(F.facets)} facets")
    return F


def fan_to_json(F: WeightedFan) -> dict:
    out = {
        "n": F.n,
        "rays": [list(r) for r in F.rays],
        "cones": [list(c) for c in F.cones],
        "weights": list(F.weights),
    }
    if not F.cones:
        out["dim"] = F.dim
    return out


# --- functions ---------------------------------------------------------------


def function_from_json(obj: Any, where: str = "") -> TRFunction:
    fs = _require(obj, "functionals", where)
    if not isinstance(fs, list) or not fs:
        raise ParseError("expected a nonempty list", field=f"{where}.functionals" if where else "functionals")
    rows = [_int_list(l, f"{where}.functionals[{i}]" if where else f"functionals[{i}]") for i, l in enumerate(fs)]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError("dimension", "functionals of differing length")
    return TRFunction(rows)


def function_to_json(T: TRFunction) -> dict:
    return {"functionals": [list(l) for l in T.functionals]}


def pair_from_json(obj: Any) -> tuple[TRFunction, TRFunction]:
    T1 = function_from_json(_require(obj, "T1", ""), "T1")
    T2 = function_from_json(_require(obj, "T2", ""), "T2")
    if T1.n != T2.n:
        raise SchemaError("dimension", "T1 and T2 live in different dimensions")
    return T1, T2


def pair_to_json(T1: TRFunction, T2: TRFunction) -> dict:
    return {"T1": function_to_json(T1), "T2": function_to_json(T2)}


# --- files ---------------------------------------------------------------------


def parse(text: str, *, normalize_rays: bool = False):
    """Parse a document into a fan, a TR function or a pair ``(T1, T2)``."""
    obj = loads(text)
    if isinstance(obj, dict) and "rays" in obj:
        return fan_from_json(obj, normalize_rays=normalize_rays)
    if isinstance(obj, dict) and "functionals" in obj:
        return function_from_json(obj)
    if isinstance(obj, dict) and "T1" in obj:
        return pair_from_json(obj)
    raise ParseError("unrecognised document: expected a fan, a function or a pair")


def parse_file(path: str | Path, *, normalize_rays: bool = False):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return parse(text, normalize_rays=normalize_rays)


def serialize(x) -> str:
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(t, TRFunction) for t in x):
        return dumps(pair_to_json(*x))
    return dumps(x)
