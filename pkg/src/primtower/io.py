"""JSON formats for Lie data and level-1 objects."""

from __future__ import annotations

import json
from pathlib import Path

from .free import default_names
from .lie import LieData
from .linalg import Field
from .tower import B1Object


class InputError(ValueError):
    """Malformed input file or inconsistent contents."""


def _field(doc) -> Field:
    try:
        return Field(int(doc["char"]))
    except KeyError as exc:
        raise InputError("missing 'char'") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad characteristic: {exc}") from exc


def _names(doc) -> tuple:
    names = doc.get("names")
    dim = doc.get("dim")
    if names is None:
        if not isinstance(dim, int) or dim < 0:
            raise InputError("need 'names' or a non-negative 'dim'")
        names = default_names(dim)
    names = tuple(str(n) for n in names)
    if dim is not None and dim != len(names):
        raise InputError(f"dim {dim} but {len(names)} names")
    return names


def _scalar(field: Field, value):
    try:
        return field.parse(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad scalar {value!r}") from exc


def _sparse(field: Field, pairs, dim: int) -> dict:
    out = {}
    try:
        for k, v in pairs:
            if not isinstance(k, int) or not 0 <= k < dim:
                raise InputError(f"coordinate {k!r} outside 0..{dim - 1}")
            out[k] = field.add(out.get(k, field.zero), _scalar(field, v))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad sparse vector {pairs!r}") from exc
    return {k: v for k, v in out.items() if v}


def lie_from_dict(doc: dict) -> LieData:
    f = _field(doc)
    names = _names(doc)
    d = len(names)
    upper = {}
    for entry in doc.get("brackets", []):
        try:
            i, j, vec = entry
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad bracket entry {entry!r}") from exc
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < d):
            raise InputError(f"bracket pair ({i}, {j}) must satisfy 0 <= i < j < {d}")
        if (i, j) in upper:
            raise InputError(f"bracket pair ({i}, {j}) given twice")
        upper[(i, j)] = _sparse(f, vec, d)
    p_map = None
    if "p_operation" in doc and not f.characteristic:
        raise InputError("p_operation needs positive characteristic")
    if f.characteristic:
        p_map = {}
        for entry in doc.get("p_operation", []):
            try:
                i, vec = entry
            except (TypeError, ValueError) as exc:
                raise InputError(f"bad p_operation entry {entry!r}") from exc
            if not isinstance(i, int) or not 0 <= i < d:
                raise InputError(f"p_operation index {i!r} outside 0..{d - 1}")
            p_map[i] = _sparse(f, vec, d)
    try:
        return LieData.antisymmetric(f, names, upper, p_map)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _vec_pairs(field: Field, vec: dict) -> list:
    return [[k, field.format(v)] for k, v in sorted(vec.items())]


def lie_to_dict(L: LieData) -> dict:
    f = L.field
    doc = {
        "char": f.characteristic,
        "dim": L.dim,
        "names": list(L.names),
        "brackets": [
            [i, j, _vec_pairs(f, L.basis_bracket(i, j))]
            for i in range(L.dim)
            for j in range(i + 1, L.dim)
            if L.basis_bracket(i, j)
        ],
    }
    if L.p_map is not None:
        doc["p_operation"] = [[i, _vec_pairs(f, v)] for i, v in sorted(L.p_map.items()) if v]
    return doc


def b1_from_dict(doc: dict) -> B1Object:
    f = _field(doc)
    names = _names(doc)
    cap = doc.get("cap")
    if not isinstance(cap, int) or cap < 1:
        raise InputError("'cap' must be a positive integer")
    values = {}
    for entry in doc.get("mu0", []):
        try:
            key = (int(entry["weight"]), int(entry["basis_index"]))
            raw = entry["value"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad mu0 entry {entry!r}") from exc
        if key in values:
            raise InputError(f"mu0 value for weight {key[0]} index {key[1]} given twice")
        if not isinstance(raw, list) or len(raw) != len(names):
            raise InputError(f"mu0 value must list {len(names)} scalars")
        values[key] = [_scalar(f, v) for v in raw]
    try:
        return B1Object.from_values(f, names, cap, values)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def b1_to_dict(obj: B1Object) -> dict:
    f = obj.field
    entries = []
    for n, i, _ in obj.basis:
        vec = obj.value(n, i)
        if vec:
            entries.append(
                {
                    "weight": n,
                    "basis_index": i,
                    "value": [f.format(vec.get(k, f.zero)) for k in range(obj.dim)],
                }
            )
    return {"char": f.characteristic, "dim": obj.dim, "names": list(obj.names), "cap": obj.cap, "mu0": entries}


def load_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path} must hold a JSON object")
    return doc


def load_lie(path) -> LieData:
    return lie_from_dict(load_json(path))


def load_b1(path) -> B1Object:
    return b1_from_dict(load_json(path))


def dump(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
