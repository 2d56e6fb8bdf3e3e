"""Workspaces: a schema, its sheaf of data, a layout, and the drop log.

Dropping a tile glues its fragment into the workspace schema, carries both
sides' tables across the gluing, combines the tables that land on the same
simplex (intersection by fiber product, or one of the two unions), restricts
every table above an intersected simplex to the rows that still project into
it, and re-derives the closure.  The log records each drop verbatim, so a
workspace replays from empty to an identical state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .curves import curve_to_zigzag
from .datatypes import DataTypeRegistry
from .documents import (
    FORMAT_VERSION,
    canonical_json,
    datatypes_to_doc,
    parse_document,
    datatypes_from_doc,
    simplices_from_doc,
    simplices_to_doc,
    sheaf_from_doc_parts,
    sheaf_to_doc_parts,
)
from .errors import DocumentError, SheafError, TileError
from .layout import Layout, layout_schema
from .schema import Embedding, Schema, disjoint_union, glue
from .sheaf import Sheaf, build_sheaf, empty_sheaf, slot_datatypes
from .tables import (
    INTERSECT,
    UNION_ALL,
    UNION_DEDUP,
    Table,
    VirtualTable,
    fiber_product,
    union,
)
from .tiles import Tile, export_tile, import_tile
from .zigzag import QueryResult, Selection, Zigzag, evaluate

Attachment = Tuple[str, str, Sequence[int]]  # workspace simplex, tile simplex, matching
Query = Union[Zigzag, Sequence[Tuple[float, float]]]

_IDENTITY_POLICIES = (INTERSECT, UNION_ALL, UNION_DEDUP)


@dataclass(frozen=True)
class Workspace:
    schema: Schema
    sheaf: Sheaf
    layout: Layout
    seed: int = 0
    log: Tuple[dict, ...] = ()
    provenance: Mapping[str, dict] = field(default_factory=dict)  # simplex -> tile provenance
    notices: Tuple[str, ...] = ()  # transient warnings, never persisted


def empty_workspace(seed: int = 0) -> Workspace:
    registry = DataTypeRegistry({})
    schema = Schema(registry, {})
    return Workspace(schema, empty_sheaf(schema), Layout({}), seed, (), {}, ())


def _permuted_table(table, new_sid: str, perm: Tuple[int, ...], schema: Schema):
    """Carry a table across an embedding, re-ordering slots per the perm
    (result slot k holds the source slot perm[k])."""
    identity = perm == tuple(range(len(perm)))
    if isinstance(table, VirtualTable):
        if table.builtin == "gamma":
            return None  # the default; re-derived on the result
        if not identity and table.builtin != "gamma":
            raise TileError(
                f"gluing would re-orient the virtual table at {table.simplex!r}; "
                "attach it along a slot matching that keeps its column order"
            )
        return VirtualTable(
            new_sid, table.builtin, slot_datatypes(schema, new_sid), table.params,
            table.predicate, table.determining, table.completer,
        )
    rows = {k: tuple(table.rows[k][perm[i]] for i in range(len(perm))) for k in table.keys}
    return Table(new_sid, table.keys, rows)


def _combine(acc, incoming, policy: Optional[str], where: str):
    """Combine two tables landing on one simplex after a glue."""
    acc_concrete = isinstance(acc, Table)
    inc_concrete = isinstance(incoming, Table)
    if acc_concrete and inc_concrete:
        if policy is None:
            raise TileError(
                f"both sides carry concrete tables at {where!r}: "
                "a policy (intersect / union_all / union_dedup) is required"
            )
        if policy == INTERSECT:
            return fiber_product(acc, incoming)
        return union(acc, incoming, policy)
    # one side virtual: intersect by membership filtering
    return fiber_product(acc, incoming)


def _slot_injections(schema: Schema, top: str) -> Dict[str, List[Tuple[int, ...]]]:
    """For every iterated face z of `top`, all slot injections
    (z slot -> top slot) induced by face paths."""
    out: Dict[str, set] = {}
    stack = [(top, tuple(range(schema.simplex(top).dim + 1)))]
    while stack:
        sid, inj = stack.pop()
        s = schema.simplex(sid)
        for i, fid in enumerate(s.faces):
            child = tuple(inj[k if k < i else k + 1] for k in range(s.dim))
            if child not in out.setdefault(fid, set()):
                out[fid].add(child)
                stack.append((fid, child))
    return {sid: sorted(injs) for sid, injs in out.items()}


def drop_tile(
    workspace: Workspace,
    tile: Tile,
    attachment: Optional[Attachment] = None,
    policy: Optional[str] = None,
) -> Workspace:
    """Glue a tile into the workspace and merge the data sheaves.

    `attachment` names a workspace simplex, a tile simplex of the same
    dimension, and the slot matching between them; None drops the tile
    disconnected.  `policy` is required exactly when the identified simplex
    carries concrete tables on both sides."""
    if policy is not None and policy not in _IDENTITY_POLICIES:
        raise TileError(f"unknown policy {policy!r}")
    if not workspace.schema.simplices:
        if attachment is not None:
            raise TileError("an empty workspace has nothing to attach to")
        new_schema = tile.schema
        emb_ws = Embedding({}, {})
        emb_tile = Embedding(
            {sid: sid for sid in tile.schema.simplices},
            {
                sid: tuple(range(tile.schema.simplex(sid).dim + 1))
                for sid in tile.schema.simplices
            },
        )
    elif attachment is None:
        new_schema, emb_ws, emb_tile = disjoint_union(workspace.schema, tile.schema)
    else:
        ws_sid, tile_sid, matching = attachment
        new_schema, emb_ws, emb_tile = glue(
            workspace.schema, ws_sid, tile.schema, tile_sid, matching
        )

    # carry primaries across, most-recent-last so combining order is stable
    contributions: Dict[str, List[Tuple[str, object]]] = {}
    for p in sorted(workspace.sheaf.primary):
        target = emb_ws.image(p)
        t = _permuted_table(
            workspace.sheaf.tables[p], target, emb_ws.slot_map(p), new_schema
        )
        if t is not None:
            contributions.setdefault(target, []).append((p, t))
    tile_target = emb_tile.image(tile.top)
    tile_table = _permuted_table(
        tile.table, tile_target, emb_tile.slot_map(tile.top), new_schema
    )
    if tile_table is not None:
        # when the tile lands on a workspace simplex whose table is only
        # derived, that derived table still takes part in the combination
        # (dropping "today's date" on a date vertex filters by it)
        if tile_target not in contributions:
            ws_preimages = [
                p for p, img in emb_ws.simplex_map.items() if img == tile_target
            ]
            for p in sorted(ws_preimages):
                existing = workspace.sheaf.tables[p]
                if isinstance(existing, Table):
                    carried = _permuted_table(
                        existing, tile_target, emb_ws.slot_map(p), new_schema
                    )
                    contributions.setdefault(tile_target, []).append((p, carried))
                    break
        contributions.setdefault(tile_target, []).append((tile.name, tile_table))

    primaries: Dict[str, object] = {}
    for sid in sorted(contributions):
        items = contributions[sid]
        acc = items[0][1]
        for _, incoming in items[1:]:
            acc = _combine(acc, incoming, policy, sid)
        primaries[sid] = acc

    # intersection semantics propagate upward: a table above a combined
    # simplex keeps only rows that still project into it
    injections_cache: Dict[str, Dict[str, List[Tuple[int, ...]]]] = {}
    filtered: Dict[str, object] = {}
    for sid in sorted(primaries):
        t = primaries[sid]
        if not isinstance(t, Table):
            filtered[sid] = t
            continue
        injections = injections_cache.setdefault(sid, _slot_injections(new_schema, sid))
        keep = list(t.keys)
        for zid, injs in injections.items():
            z = primaries.get(zid)
            if z is None or zid == sid:
                continue
            ok = []
            for k in keep:
                row = t.rows[k]
                good = True
                for inj in injs:
                    sub = tuple(row[inj[j]] for j in range(len(inj)))
                    if isinstance(z, Table):
                        if sub not in set(z.values()):
                            good = False
                            break
                    elif not z.membership(sub):
                        good = False
                        break
                if good:
                    ok.append(k)
            keep = ok
        filtered[sid] = Table(sid, tuple(keep), {k: t.rows[k] for k in keep})

    try:
        new_sheaf = build_sheaf(new_schema, filtered, allow_supertables=True)
    except SheafError as err:
        raise TileError(f"dropping {tile.name!r} breaks the sheaf: {err}") from err

    notices = []
    high = max((s.dim for s in new_schema.simplices.values()), default=0)
    if high > 3:
        notices.append(
            f"schema contains a {high}-simplex; dimensions above 3 are drawn as 1-skeletons"
        )

    tile_doc = json.loads(export_tile(tile))
    new_provenance: Dict[str, dict] = {
        emb_ws.image(sid): prov for sid, prov in workspace.provenance.items()
    }
    for sid in tile.schema.simplices:
        new_provenance[emb_tile.image(sid)] = tile_doc["provenance"]

    entry = {
        "op": "drop_tile",
        "tile": tile_doc,
        "attachment": None
        if attachment is None
        else {
            "workspace_simplex": attachment[0],
            "tile_simplex": attachment[1],
            "matching": list(attachment[2]),
        },
        "policy": policy,
    }
    return Workspace(
        new_schema,
        new_sheaf,
        layout_schema(new_schema, workspace.seed),
        workspace.seed,
        workspace.log + (entry,),
        new_provenance,
        tuple(notices),
    )


def run_query(
    workspace: Workspace, query: Query, selection: Selection
) -> QueryResult:
    """Evaluate a zigzag, or a drawn polyline converted to one."""
    if isinstance(query, Zigzag):
        zigzag = query
    else:
        zigzag = curve_to_zigzag(workspace.schema, workspace.layout, query)
    return evaluate(workspace.sheaf, zigzag, selection)


# ---------------------------------------------------------------------------
# persistence


def save_workspace(workspace: Workspace) -> str:
    tables, keymaps = sheaf_to_doc_parts(workspace.sheaf)
    doc = {
        "version": FORMAT_VERSION,
        "datatypes": datatypes_to_doc(workspace.schema.registry),
        "simplices": simplices_to_doc(workspace.schema),
        "tables": tables,
        "keymaps": keymaps,
        "layout": {
            "seed": workspace.seed,
            "points": {
                v: [p[0], p[1]] for v, p in sorted(workspace.layout.points.items())
            },
        },
        "provenance": {sid: workspace.provenance[sid] for sid in sorted(workspace.provenance)},
        "log": list(workspace.log),
    }
    return canonical_json(doc)


def load_workspace(text: str) -> Workspace:
    doc = parse_document(text)
    registry = datatypes_from_doc(doc.get("datatypes", []))
    schema = simplices_from_doc(doc.get("simplices", []), registry)
    sheaf = sheaf_from_doc_parts(schema, doc.get("tables"), doc.get("keymaps"))
    layout_doc = doc.get("layout") or {}
    points = {v: (p[0], p[1]) for v, p in (layout_doc.get("points") or {}).items()}
    for s in schema.simplices.values():
        if s.dim == 0 and s.id not in points:
            raise DocumentError(f"layout is missing vertex {s.id!r}")
    seed = layout_doc.get("seed", 0)
    log = tuple(doc.get("log") or ())
    provenance = dict(doc.get("provenance") or {})
    return Workspace(schema, sheaf, Layout(points), seed, log, provenance, ())


def replay_log(log: Sequence[dict], seed: int = 0) -> Workspace:
    """Re-run a drop log from the empty workspace."""
    ws = empty_workspace(seed)
    for entry in log:
        if entry.get("op") != "drop_tile":
            raise DocumentError(f"unknown log entry {entry.get('op')!r}")
        tile = import_tile(canonical_json(entry["tile"]))
        att_doc = entry.get("attachment")
        attachment = (
            None
            if att_doc is None
            else (
                att_doc["workspace_simplex"],
                att_doc["tile_simplex"],
                tuple(att_doc["matching"]),
            )
        )
        ws = drop_tile(ws, tile, attachment, entry.get("policy"))
    return ws
