"""Canonical document format for schemas, tables, tiles and workspaces.

Documents are JSON with sorted keys, compact separators, UTF-8, and a
trailing newline; saving the same object twice is byte-identical.  Only
explicitly-set tables and key maps are stored - derived tables are rebuilt
deterministically on load.  Virtual tables serialize as a built-in name plus
parameters; user-code predicates do not serialize.
"""

from __future__ import annotations

import json
from typing import Dict, List, Tuple

from .datatypes import DataType, DataTypeRegistry
from .errors import DocumentError
from .schema import Schema, Simplex, validate_schema
from .sheaf import Sheaf, build_sheaf, slot_datatypes
from .tables import Table, VirtualTable
from .zigzag import Selection, Zigzag, ZigzagStep

FORMAT_VERSION = 1


def canonical_json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError(f"not valid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported document version {version!r}")
    return doc


# ---------------------------------------------------------------------------
# datatypes


def datatypes_to_doc(registry: DataTypeRegistry) -> List[dict]:
    out = []
    for name in sorted(registry.types):
        t = registry.types[name]
        entry: Dict[str, object] = {"name": t.name, "kind": t.kind}
        if t.values is not None:
            entry["values"] = list(t.values)
        out.append(entry)
    return out


def datatypes_from_doc(items: object) -> DataTypeRegistry:
    if not isinstance(items, list):
        raise DocumentError("datatypes must be a list")
    types = []
    for entry in items:
        try:
            values = entry.get("values")
            types.append(
                DataType(entry["name"], entry["kind"], tuple(values) if values else None)
            )
        except (KeyError, TypeError) as err:
            raise DocumentError(f"malformed datatype entry {entry!r}: {err}") from err
    return DataTypeRegistry.of(*types)


# ---------------------------------------------------------------------------
# schemas


def simplices_to_doc(schema: Schema) -> List[dict]:
    out = []
    for sid in sorted(schema.simplices, key=lambda i: (schema.simplices[i].dim, i)):
        s = schema.simplices[sid]
        out.append(
            {"id": s.id, "dim": s.dim, "faces": list(s.faces), "label": s.label}
        )
    return out


def simplices_from_doc(items: object, registry: DataTypeRegistry) -> Schema:
    if not isinstance(items, list):
        raise DocumentError("simplices must be a list")
    simplices: Dict[str, Simplex] = {}
    for entry in items:
        try:
            s = Simplex(entry["id"], entry["dim"], tuple(entry["faces"]), entry.get("label"))
        except (KeyError, TypeError) as err:
            raise DocumentError(f"malformed simplex entry {entry!r}: {err}") from err
        if s.id in simplices:
            raise DocumentError(f"duplicate simplex id {s.id!r}")
        simplices[s.id] = s
    schema = Schema(registry, simplices)
    problems = validate_schema(schema)
    if problems:
        first = problems[0]
        raise DocumentError(
            f"schema does not validate: {first.kind} at {first.simplex}: {first.detail}"
        )
    return schema


def schema_to_doc(schema: Schema) -> dict:
    return {
        "version": FORMAT_VERSION,
        "datatypes": datatypes_to_doc(schema.registry),
        "simplices": simplices_to_doc(schema),
    }


def schema_from_doc(doc: dict) -> Schema:
    registry = datatypes_from_doc(doc.get("datatypes", []))
    return simplices_from_doc(doc.get("simplices", []), registry)


# ---------------------------------------------------------------------------
# tables and sheaves


def table_to_doc(table: object) -> dict:
    if isinstance(table, VirtualTable):
        table.require_serializable()
        return {
            "simplex": table.simplex,
            "virtual": {
                "builtin": table.builtin,
                "params": {k: v for k, v in table.params},
            },
        }
    assert isinstance(table, Table)
    return {
        "simplex": table.simplex,
        "keys": list(table.keys),
        "rows": [list(table.rows[k]) for k in table.keys],
    }


def table_from_doc(entry: object, schema: Schema) -> object:
    if not isinstance(entry, dict) or "simplex" not in entry:
        raise DocumentError(f"malformed table entry {entry!r}")
    sid = entry["simplex"]
    if sid not in schema.simplices:
        raise DocumentError(f"table references missing simplex {sid!r}")
    if "virtual" in entry:
        spec = entry["virtual"]
        builtin = spec.get("builtin")
        params = spec.get("params", {})
        if builtin not in ("gamma", "addition", "difference"):
            raise DocumentError(f"unknown virtual built-in {builtin!r}")
        return VirtualTable(
            sid,
            builtin,
            slot_datatypes(schema, sid),
            params=tuple(sorted(params.items())),
        )
    try:
        keys = entry["keys"]
        rows = entry["rows"]
        return Table(sid, tuple(keys), {k: tuple(r) for k, r in zip(keys, rows)})
    except (KeyError, TypeError) as err:
        raise DocumentError(f"malformed table entry for {sid!r}: {err}") from err


def sheaf_to_doc_parts(sheaf: Sheaf) -> Tuple[List[dict], List[dict]]:
    tables = [table_to_doc(sheaf.tables[sid]) for sid in sorted(sheaf.primary)]
    keymaps = []
    for sid, i in sorted(sheaf.explicit_maps):
        keymaps.append(
            {
                "simplex": sid,
                "face_index": i,
                "map": dict(sorted(sheaf.key_maps[(sid, i)].items())),
            }
        )
    return tables, keymaps


def sheaf_from_doc_parts(
    schema: Schema, tables_doc: object, keymaps_doc: object
) -> Sheaf:
    explicit = {}
    for entry in tables_doc or []:
        t = table_from_doc(entry, schema)
        explicit[t.simplex] = t  # type: ignore[attr-defined]
    explicit_maps = {}
    for entry in keymaps_doc or []:
        try:
            explicit_maps[(entry["simplex"], entry["face_index"])] = dict(entry["map"])
        except (KeyError, TypeError) as err:
            raise DocumentError(f"malformed keymap entry {entry!r}: {err}") from err
    return build_sheaf(schema, explicit, explicit_maps, allow_supertables=True)


# ---------------------------------------------------------------------------
# zigzags and selections (wire forms)


def zigzag_to_doc(zigzag: Zigzag) -> dict:
    steps = []
    for s in zigzag.steps:
        face: object = s.face_path[0] if len(s.face_path) == 1 else list(s.face_path)
        steps.append({"simplex": s.target, "direction": s.direction, "face_index": face})
    return {"start": zigzag.start, "steps": steps}


def zigzag_from_doc(doc: object) -> Zigzag:
    if not isinstance(doc, dict) or "start" not in doc:
        raise DocumentError(f"malformed zigzag {doc!r}")
    steps = []
    for entry in doc.get("steps", []):
        try:
            face = entry["face_index"]
            path = tuple(face) if isinstance(face, list) else (face,)
            steps.append(ZigzagStep(entry["direction"], path, entry["simplex"]))
        except (KeyError, TypeError) as err:
            raise DocumentError(f"malformed zigzag step {entry!r}: {err}") from err
    return Zigzag(doc["start"], tuple(steps))


def selection_from_doc(doc: object) -> Selection:
    if not isinstance(doc, dict) or "simplex" not in doc:
        raise DocumentError(f"malformed selection {doc!r}")
    sid = doc["simplex"]
    if "keys" in doc:
        return Selection(sid, keys=tuple(doc["keys"]))
    if "rows" in doc:
        rows = [tuple(r) for r in doc["rows"]]
        keys = tuple(doc.get("row_keys") or (f"sel{i}" for i in range(len(rows))))
        table = Table(sid, keys, dict(zip(keys, rows)))
        key_map = doc.get("key_map")
        return Selection(sid, table=table, key_map=dict(key_map) if key_map else None)
    raise DocumentError("selection needs keys or rows")


def selection_to_doc(selection: Selection) -> dict:
    if selection.keys is not None:
        return {"simplex": selection.simplex, "keys": list(selection.keys)}
    table = selection.table
    assert table is not None
    doc: Dict[str, object] = {
        "simplex": selection.simplex,
        "row_keys": list(table.keys),
        "rows": [list(table.rows[k]) for k in table.keys],
    }
    if selection.key_map is not None:
        doc["key_map"] = dict(sorted(selection.key_map.items()))
    return doc
