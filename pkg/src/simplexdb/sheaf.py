"""Sheaves: one table per simplex plus key maps along face inclusions.

Unset simplices default to the universal virtual table (everything
type-conformant), so a sheaf always has a table everywhere.  Setting a
concrete table derives concrete tables for the whole closure underneath it
(the projection images) along with the key maps that make the squares

    attrs_face(key_map_i(k)) == delete_slot_i(attrs(k))

commute row by row.  Key maps exist exactly where both ends are concrete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .datatypes import DataType
from .errors import EvaluationError, SheafError
from .schema import Schema, Violation, slot_labels
from .tables import (
    Row,
    Table,
    VirtualTable,
    check_conformance,
    delete_slot,
    join_keys,
    table_from_pairs,
)

SheafTable = Union[Table, VirtualTable]
KeyMap = Mapping[str, str]


def slot_datatypes(schema: Schema, simplex_id: str) -> Tuple[DataType, ...]:
    return tuple(schema.registry.get(name) for name in slot_labels(schema, simplex_id))


def gamma(schema: Schema, simplex_id: str) -> VirtualTable:
    """The universal table over a simplex: every type-conformant row.

    Enumerable exactly when every slot datatype is enumerated.
    """
    return VirtualTable(simplex_id, "gamma", slot_datatypes(schema, simplex_id))


@dataclass(frozen=True)
class Sheaf:
    """Immutable assignment of tables and key maps over a schema.

    `primary` marks explicitly-set tables; everything else is either derived
    (concrete projection images under a primary) or the default universal
    table.  `explicit_maps` marks key maps supplied by the caller rather than
    derived.
    """

    schema: Schema
    tables: Mapping[str, SheafTable] = field(default_factory=dict)
    key_maps: Mapping[Tuple[str, int], KeyMap] = field(default_factory=dict)
    primary: FrozenSet[str] = frozenset()
    explicit_maps: FrozenSet[Tuple[str, int]] = frozenset()

    def table(self, simplex_id: str) -> SheafTable:
        self.schema.simplex(simplex_id)
        return self.tables[simplex_id]

    def key_map(self, simplex_id: str, face_index: int) -> Optional[KeyMap]:
        return self.key_maps.get((simplex_id, face_index))


def empty_sheaf(schema: Schema) -> Sheaf:
    tables = {sid: gamma(schema, sid) for sid in schema.simplices}
    return Sheaf(schema, tables, {}, frozenset(), frozenset())


def _as_table(schema: Schema, simplex_id: str, rows: object) -> SheafTable:
    if isinstance(rows, (Table, VirtualTable)):
        if rows.simplex != simplex_id:
            raise SheafError(
                f"table is over {rows.simplex!r}, cannot set it at {simplex_id!r}"
            )
        return rows
    if isinstance(rows, Mapping):
        pairs = [(k, tuple(v)) for k, v in rows.items()]
        return table_from_pairs(simplex_id, pairs)
    seq = list(rows)  # type: ignore[arg-type]
    if seq and isinstance(seq[0], tuple) and len(seq[0]) == 2 and isinstance(seq[0][0], str) and isinstance(seq[0][1], (tuple, list)):
        return table_from_pairs(simplex_id, [(k, tuple(v)) for k, v in seq])
    keys = tuple(f"r{i}" for i in range(len(seq)))
    return Table(simplex_id, keys, {k: tuple(v) for k, v in zip(keys, seq)})


def build_sheaf(
    schema: Schema,
    explicit_tables: Mapping[str, SheafTable],
    explicit_key_maps: Optional[Mapping[Tuple[str, int], KeyMap]] = None,
    allow_supertables: bool = False,
) -> Sheaf:
    """Assemble a sheaf from explicitly-set tables.

    Concrete tables derive the closure below them: each face receives the
    union of the projection images of its concrete cofaces, with canonical
    sequential keys, unless the face was set explicitly, in which case the
    projected rows are looked up by value (the face must contain them; with
    `allow_supertables` it may also contain more).
    """
    explicit_key_maps = dict(explicit_key_maps or {})
    tables: Dict[str, SheafTable] = {}
    for sid, t in explicit_tables.items():
        schema.simplex(sid)
        if isinstance(t, Table):
            dts = slot_datatypes(schema, sid)
            for k in t.keys:
                check_conformance(dts, t.rows[k])
        tables[sid] = t

    pending: Dict[str, Dict[Row, str]] = {}
    key_maps: Dict[Tuple[str, int], Dict[str, str]] = {
        k: dict(v) for k, v in explicit_key_maps.items()
    }
    covered: Dict[str, set] = {}

    by_dim = sorted(schema.simplices.values(), key=lambda s: (-s.dim, s.id))
    for s in by_dim:
        if s.id not in tables:
            if s.id in pending:
                assigned = pending[s.id]
                keys = tuple(assigned.values())
                tables[s.id] = Table(s.id, keys, {assigned[v]: v for v in assigned})
            else:
                tables[s.id] = gamma(schema, s.id)
        t = tables[s.id]
        if not isinstance(t, Table):
            continue
        for i, fid in enumerate(s.faces):
            if (s.id, i) in explicit_key_maps:
                continue
            face_t = tables.get(fid)
            if isinstance(face_t, VirtualTable):
                continue  # virtual face: no key map
            km: Dict[str, str] = {}
            if isinstance(face_t, Table):
                # value lookup; duplicate values resolve to the first key
                lookup: Dict[Row, str] = {}
                for k in face_t.keys:
                    v = face_t.rows[k]
                    if v not in lookup:
                        lookup[v] = k
                for k in t.keys:
                    v = delete_slot(t.rows[k], i)
                    if v not in lookup:
                        raise SheafError(
                            f"face table at {fid!r} is missing projected row {v!r} "
                            f"from {s.id!r}; supply explicit key maps"
                        )
                    km[k] = lookup[v]
                    covered.setdefault(fid, set()).add(v)
            else:
                assigned = pending.setdefault(fid, {})
                for k in t.keys:
                    v = delete_slot(t.rows[k], i)
                    if v not in assigned:
                        assigned[v] = f"k{len(assigned)}"
                    km[k] = assigned[v]
            key_maps[(s.id, i)] = km

    if not allow_supertables:
        for fid, values in covered.items():
            face_t = tables[fid]
            if isinstance(face_t, Table) and fid in explicit_tables:
                extra = set(face_t.values()) - values
                if extra:
                    raise SheafError(
                        f"explicit table at {fid!r} is not the projection image: "
                        f"extra rows {sorted(map(repr, extra))[:3]}"
                    )

    sheaf = Sheaf(
        schema,
        tables,
        key_maps,
        frozenset(explicit_tables),
        frozenset(explicit_key_maps),
    )
    problems = validate_sheaf(sheaf)
    if problems:
        first = problems[0]
        raise SheafError(f"sheaf construction failed: {first.kind} at {first.simplex}: {first.detail}")
    return sheaf


def set_table(
    sheaf: Sheaf,
    simplex_id: str,
    rows: object,
    key_maps: Optional[Mapping[int, KeyMap]] = None,
) -> Sheaf:
    """Return a new sheaf with a table stored at one simplex.

    Without `key_maps`, concrete face tables are derived as projection
    images recursively down to the vertices; existing explicit face tables
    must equal the image.  With `key_maps` (face index -> key map) the given
    maps are used for the direct faces and must commute.
    """
    table = _as_table(sheaf.schema, simplex_id, rows)
    explicit: Dict[str, SheafTable] = {
        sid: sheaf.tables[sid] for sid in sheaf.primary if sid != simplex_id
    }
    explicit[simplex_id] = table
    emaps: Dict[Tuple[str, int], KeyMap] = {
        k: sheaf.key_maps[k] for k in sheaf.explicit_maps if k[0] != simplex_id
    }
    if key_maps is not None:
        s = sheaf.schema.simplex(simplex_id)
        for i, km in key_maps.items():
            if not 0 <= i <= s.dim:
                raise SheafError(f"face index {i} out of range for {simplex_id!r}")
            emaps[(simplex_id, i)] = dict(km)
    return build_sheaf(sheaf.schema, explicit, emaps)


def project_table(sheaf: Sheaf, simplex_id: str, face_index: int, table: Table) -> Table:
    """Delete vertex slot `face_index`: the pullback functor along the face
    inclusion.  Keys are unchanged, so on key maps this is the identity."""
    s = sheaf.schema.simplex(simplex_id)
    if not 0 <= face_index <= s.dim or s.dim == 0:
        raise SheafError(f"face index {face_index} out of range for {simplex_id!r}")
    if not isinstance(table, Table):
        raise SheafError("cannot project a virtual table; it is never materialized")
    if table.simplex != simplex_id:
        raise SheafError(f"table is over {table.simplex!r}, not {simplex_id!r}")
    rows = {k: delete_slot(table.rows[k], face_index) for k in table.keys}
    return Table(s.faces[face_index], table.keys, rows)


def pushforward_universal(
    sheaf: Sheaf, simplex_id: str, face_index: int, table: Table
) -> Table:
    """Extend rows over a face to rows over the coface: the push-forward
    functor.  Each input row is paired with every completing value of the
    deleted slot; completions come from the coface's virtual table when it
    has an applicable determining set, otherwise from the slot's enumerated
    datatype."""
    s = sheaf.schema.simplex(simplex_id)
    if not 0 <= face_index <= s.dim or s.dim == 0:
        raise SheafError(f"face index {face_index} out of range for {simplex_id!r}")
    face_id = s.faces[face_index]
    if table.simplex != face_id:
        raise SheafError(
            f"table is over {table.simplex!r}, expected face {face_id!r} of {simplex_id!r}"
        )
    dts = slot_datatypes(sheaf.schema, simplex_id)
    sheaf_t = sheaf.tables[simplex_id]
    pairs: List[Tuple[str, Row]] = []
    for k in table.keys:
        bindings = _bindings_from_face(table.rows[k], face_index)
        completions = _completions(sheaf_t, dts, bindings, frozenset({face_index}))
        for n, row in enumerate(completions):
            pairs.append((join_keys(k, str(n)), row))
    return table_from_pairs(simplex_id, pairs)


def _bindings_from_face(row: Row, face_index: int) -> Dict[int, object]:
    bindings: Dict[int, object] = {}
    for j, v in enumerate(row):
        bindings[j if j < face_index else j + 1] = v
    return bindings


def _completions(
    sheaf_t: SheafTable,
    dts: Sequence[DataType],
    bindings: Dict[int, object],
    missing: FrozenSet[int],
) -> List[Row]:
    """Finite completion of partially-bound rows over a coface."""
    if isinstance(sheaf_t, VirtualTable) and sheaf_t.can_complete(missing):
        return sheaf_t.complete(bindings)
    if all(dts[i].is_enumerated for i in missing):
        import itertools

        slots = sorted(missing)
        out: List[Row] = []
        for combo in itertools.product(*(dts[i].values for i in slots)):  # type: ignore[arg-type]
            full = dict(bindings)
            full.update(dict(zip(slots, combo)))
            row = tuple(full[i] for i in range(len(dts)))
            if isinstance(sheaf_t, VirtualTable) and not sheaf_t.membership(row):
                continue
            out.append(row)
        return out
    raise EvaluationError(
        f"cannot complete slots {sorted(missing)} over {getattr(sheaf_t, 'simplex', None)!r}: "
        "no enumerated type and no applicable determining set"
    )


def validate_sheaf(sheaf: Sheaf) -> List[Violation]:
    """Conformance, key-map totality/commuting, and two-step composition."""
    report: List[Violation] = []
    schema = sheaf.schema
    for sid, s in schema.simplices.items():
        t = sheaf.tables.get(sid)
        if t is None:
            report.append(Violation("missing-table", sid, "no table assigned"))
            continue
        if isinstance(t, Table):
            dts = slot_datatypes(schema, sid)
            for k in t.keys:
                row = t.rows[k]
                if len(row) != len(dts) or not all(
                    dt.conforms(v) for dt, v in zip(dts, row)
                ):
                    report.append(
                        Violation("non-conformant-row", sid, f"row {k!r} = {row!r}")
                    )
    for sid, s in schema.simplices.items():
        t = sheaf.tables.get(sid)
        if not isinstance(t, Table):
            continue
        for i, fid in enumerate(s.faces):
            face_t = sheaf.tables.get(fid)
            if not isinstance(face_t, Table):
                continue
            km = sheaf.key_maps.get((sid, i))
            if km is None:
                report.append(
                    Violation(
                        "missing-keymap",
                        sid,
                        f"no key map for face {i} ({fid!r}) though both tables are concrete",
                    )
                )
                continue
            for k in t.keys:
                if k not in km:
                    report.append(
                        Violation("partial-keymap", sid, f"key {k!r} unmapped at face {i}")
                    )
                    continue
                if km[k] not in face_t.rows:
                    report.append(
                        Violation(
                            "dangling-keymap",
                            sid,
                            f"key {k!r} maps to missing key {km[k]!r} at face {i}",
                        )
                    )
                    continue
                if face_t.rows[km[k]] != delete_slot(t.rows[k], i):
                    report.append(
                        Violation(
                            "non-commuting-keymap",
                            sid,
                            f"key {k!r} at face {i}: "
                            f"{face_t.rows[km[k]]!r} != {delete_slot(t.rows[k], i)!r}",
                        )
                    )
    # two-step composition along the simplicial identity
    for sid, s in schema.simplices.items():
        if s.dim < 2 or not isinstance(sheaf.tables.get(sid), Table):
            continue
        for j in range(s.dim + 1):
            for i in range(j):
                km_j = sheaf.key_maps.get((sid, j))
                km_i = sheaf.key_maps.get((sid, i))
                km_ji = sheaf.key_maps.get((s.faces[j], i))
                km_ij = sheaf.key_maps.get((s.faces[i], j - 1))
                if None in (km_j, km_i, km_ji, km_ij):
                    continue
                for k in sheaf.tables[sid].keys:  # type: ignore[union-attr]
                    left = km_ji.get(km_j.get(k))  # type: ignore[union-attr]
                    right = km_ij.get(km_i.get(k))  # type: ignore[union-attr]
                    if left != right:
                        report.append(
                            Violation(
                                "non-composing-keymaps",
                                sid,
                                f"key {k!r}: faces ({i},{j}) compose to {left!r} vs {right!r}",
                            )
                        )
    return report
