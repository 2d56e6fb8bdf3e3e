"""Query paths: zigzags of face inclusions and their evaluation.

A zigzag alternates descents (simplex to an iterated face: delete columns,
keep keys) and ascents (face to a coface: pull back along the sheaf's key
map, multiplying rows per matching coface row).  Evaluation carries three
things per working row: its values over the current simplex, a back
reference to the selection row it came from, and - while the current
position's table is concrete - an anchor key into that table so ascents can
pair by key rather than by value.  Crossing a virtual table drops the
anchor; subsequent ascents pair by value, which agrees with the key-level
pullback whenever both are defined.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import EvaluationError, ZigzagError
from .schema import Schema
from .sheaf import Sheaf, _bindings_from_face, _completions, slot_datatypes
from .tables import Row, Table, delete_slot, join_keys, table_from_pairs

DESCEND = "descend"
ASCEND = "ascend"


@dataclass(frozen=True)
class ZigzagStep:
    """One move to an iterated face (descend) or from one (ascend).

    `face_path` lists the face indices of the inclusion, always read from
    the higher simplex downward; a single-index path is the common case of
    moving one dimension.
    """

    direction: str
    face_path: Tuple[int, ...]
    target: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "face_path", tuple(self.face_path))
        if self.direction not in (DESCEND, ASCEND):
            raise ZigzagError(f"unknown direction {self.direction!r}")
        if not self.face_path:
            raise ZigzagError("a zigzag step needs at least one face index")

    @property
    def face_index(self) -> int:
        return self.face_path[0]


@dataclass(frozen=True)
class Zigzag:
    start: str
    steps: Tuple[ZigzagStep, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def end(self) -> str:
        return self.steps[-1].target if self.steps else self.start

    def simplex_sequence(self) -> List[str]:
        return [self.start] + [s.target for s in self.steps]


def validate_zigzag(schema: Schema, zigzag: Zigzag) -> None:
    """Raise unless every step names a real iterated-face incidence."""
    cur = schema.simplex(zigzag.start).id
    for step in zigzag.steps:
        schema.simplex(step.target)
        if step.direction == DESCEND:
            reached = _descend_ids(schema, cur, step.face_path)
            if reached[-1] != step.target:
                raise ZigzagError(
                    f"descend from {cur!r} along {step.face_path} reaches "
                    f"{reached[-1]!r}, not {step.target!r}"
                )
        else:
            reached = _descend_ids(schema, step.target, step.face_path)
            if reached[-1] != cur:
                raise ZigzagError(
                    f"ascend to {step.target!r} along {step.face_path} starts at "
                    f"{reached[-1]!r}, not {cur!r}"
                )
        cur = step.target


def _descend_ids(schema: Schema, top: str, path: Sequence[int]) -> List[str]:
    ids = [top]
    for i in path:
        s = schema.simplex(ids[-1])
        if s.dim == 0 or not 0 <= i <= s.dim:
            raise ZigzagError(f"face index {i} out of range at {ids[-1]!r}")
        ids.append(s.faces[i])
    return ids


def _lowest_path(schema: Schema, top: str, bottom: str, depth: int) -> Optional[Tuple[int, ...]]:
    """Lexicographically lowest face-index path from `top` down to `bottom`."""
    if depth == 0:
        return () if top == bottom else None
    s = schema.simplex(top)
    for i in range(s.dim + 1):
        rest = _lowest_path(schema, s.faces[i], bottom, depth - 1)
        if rest is not None:
            return (i,) + rest
    return None


def zigzag_from_sequence(
    schema: Schema,
    simplex_ids: Sequence[str],
    face_paths: Optional[Sequence[Optional[Sequence[int]]]] = None,
) -> Zigzag:
    """Build a zigzag through the given simplices, inferring directions and
    face indices.  Ambiguous incidences resolve to the lowest face index; an
    entry in `face_paths` overrides the inference for that step."""
    if not simplex_ids:
        raise ZigzagError("a zigzag needs at least one simplex")
    ids = [schema.simplex(s).id for s in simplex_ids]
    if face_paths is not None and len(face_paths) != len(ids) - 1:
        raise ZigzagError("face_paths must have one entry per consecutive pair")
    steps: List[ZigzagStep] = []
    for n in range(1, len(ids)):
        prev, cur = ids[n - 1], ids[n]
        dp = schema.simplex(prev).dim
        dc = schema.simplex(cur).dim
        override = face_paths[n - 1] if face_paths is not None else None
        if dp > dc:
            path = tuple(override) if override is not None else _lowest_path(
                schema, prev, cur, dp - dc
            )
            if path is None or _descend_ids(schema, prev, path)[-1] != cur:
                raise ZigzagError(f"simplices {prev!r} and {cur!r} are not face-incident")
            steps.append(ZigzagStep(DESCEND, path, cur))
        elif dc > dp:
            path = tuple(override) if override is not None else _lowest_path(
                schema, cur, prev, dc - dp
            )
            if path is None or _descend_ids(schema, cur, path)[-1] != prev:
                raise ZigzagError(f"simplices {prev!r} and {cur!r} are not face-incident")
            steps.append(ZigzagStep(ASCEND, path, cur))
        else:
            raise ZigzagError(
                f"simplices {prev!r} and {cur!r} have equal dimension and are not face-incident"
            )
    return Zigzag(ids[0], tuple(steps))


def concat_zigzags(z1: Zigzag, z2: Zigzag) -> Zigzag:
    if z1.end != z2.start:
        raise ZigzagError(f"cannot concatenate: {z1.end!r} != {z2.start!r}")
    return Zigzag(z1.start, z1.steps + z2.steps)


# ---------------------------------------------------------------------------
# selections and evaluation


@dataclass(frozen=True)
class Selection:
    """The rows fed into a query at its start simplex.

    Either a subset of the sheaf table's keys, or a fresh table with an
    explicit key map into the sheaf table (the key map is omitted when the
    base table is virtual; rows are then membership-checked instead)."""

    simplex: str
    keys: Optional[Tuple[str, ...]] = None
    table: Optional[Table] = None
    key_map: Optional[Mapping[str, str]] = None

    def __post_init__(self) -> None:
        if (self.keys is None) == (self.table is None):
            raise EvaluationError("selection needs exactly one of keys or a table")
        if self.keys is not None:
            object.__setattr__(self, "keys", tuple(self.keys))


@dataclass(frozen=True)
class QueryResult:
    """End table, the back map onto the selection, and their pairing.

    `end_anchors` gives, per end row, its key in the sheaf's table at the end
    simplex (None where the path crossed a virtual table), which lets a
    result feed a follow-up query."""

    start: str
    end: str
    end_table: Table
    back_map: Dict[str, str]
    graph: Table
    selection_attrs: Dict[str, Row] = field(default_factory=dict)
    end_anchors: Dict[str, Optional[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class _WorkRow:
    key: str
    back: str
    anchor: Optional[str]
    values: Row


def _initial_rows(sheaf: Sheaf, selection: Selection) -> List[_WorkRow]:
    base_t = sheaf.table(selection.simplex)
    if selection.keys is not None:
        if not isinstance(base_t, Table):
            raise EvaluationError(
                f"selection by keys needs a concrete table at {selection.simplex!r}"
            )
        rows = []
        for k in selection.keys:
            if k not in base_t.rows:
                raise EvaluationError(f"selection key {k!r} not in table at {selection.simplex!r}")
            rows.append(_WorkRow(k, k, k, base_t.rows[k]))
        return rows
    table = selection.table
    assert table is not None
    if table.simplex != selection.simplex:
        raise EvaluationError(
            f"selection table is over {table.simplex!r}, not {selection.simplex!r}"
        )
    if isinstance(base_t, Table):
        if selection.key_map is None:
            raise EvaluationError(
                "selection over a concrete table needs a key map into it"
            )
        rows = []
        for k in table.keys:
            if k not in selection.key_map:
                raise EvaluationError(f"selection key {k!r} unmapped")
            target = selection.key_map[k]
            if target not in base_t.rows:
                raise EvaluationError(f"selection maps {k!r} to missing key {target!r}")
            if base_t.rows[target] != table.rows[k]:
                raise EvaluationError(
                    f"selection row {k!r} does not commute with the base table"
                )
            rows.append(_WorkRow(k, k, target, table.rows[k]))
        return rows
    rows = []
    for k in table.keys:
        if not base_t.membership(table.rows[k]):
            raise EvaluationError(
                f"selection row {k!r} = {table.rows[k]!r} fails the virtual table at "
                f"{selection.simplex!r}"
            )
        rows.append(_WorkRow(k, k, None, table.rows[k]))
    return rows


def _single_steps(schema: Schema, zigzag: Zigzag) -> List[Tuple[str, int, str]]:
    """Expand composite steps into single face moves (direction, index, target)."""
    out: List[Tuple[str, int, str]] = []
    cur = zigzag.start
    for step in zigzag.steps:
        if step.direction == DESCEND:
            ids = _descend_ids(schema, cur, step.face_path)
            for i, target in zip(step.face_path, ids[1:]):
                out.append((DESCEND, i, target))
        else:
            ids = _descend_ids(schema, step.target, step.face_path)
            for n in range(len(step.face_path) - 1, -1, -1):
                out.append((ASCEND, step.face_path[n], ids[n]))
        cur = step.target
    return out


def evaluate(sheaf: Sheaf, zigzag: Zigzag, selection: Selection) -> QueryResult:
    """Run a zigzag starting from the selection, per the project/pull-back
    semantics described in the module docstring."""
    schema = sheaf.schema
    if selection.simplex != zigzag.start:
        raise EvaluationError(
            f"selection is over {selection.simplex!r} but the zigzag starts at "
            f"{zigzag.start!r}"
        )
    validate_zigzag(schema, zigzag)
    state = _initial_rows(sheaf, selection)
    sel_attrs = {w.back: w.values for w in state}
    cur = zigzag.start
    for direction, i, target in _single_steps(schema, zigzag):
        if direction == DESCEND:
            km = sheaf.key_map(cur, i)
            state = [
                _WorkRow(
                    w.key,
                    w.back,
                    km[w.anchor] if (w.anchor is not None and km is not None) else None,
                    delete_slot(w.values, i),
                )
                for w in state
            ]
        else:
            coface_t = sheaf.table(target)
            if isinstance(coface_t, Table):
                km = sheaf.key_map(target, i)
                fibers: Dict[str, List[str]] = {}
                if km is not None:
                    for k in coface_t.keys:
                        fibers.setdefault(km[k], []).append(k)
                new_state: List[_WorkRow] = []
                for w in state:
                    if w.anchor is not None and km is not None:
                        matches = fibers.get(w.anchor, [])
                    else:
                        matches = [
                            k
                            for k in coface_t.keys
                            if delete_slot(coface_t.rows[k], i) == w.values
                        ]
                    for k in matches:
                        new_state.append(
                            _WorkRow(join_keys(w.key, k), w.back, k, coface_t.rows[k])
                        )
                state = new_state
            else:
                dts = slot_datatypes(schema, target)
                new_state = []
                for w in state:
                    bindings = _bindings_from_face(w.values, i)
                    completions = _completions(coface_t, dts, bindings, frozenset({i}))
                    for n, row in enumerate(completions):
                        new_state.append(
                            _WorkRow(join_keys(w.key, str(n)), w.back, None, row)
                        )
                state = new_state
        cur = target

    end_keys = tuple(w.key for w in state)
    end_table = Table(zigzag.end, end_keys, {w.key: w.values for w in state})
    back_map = {w.key: w.back for w in state}
    graph = Table(
        None, end_keys, {w.key: sel_attrs[w.back] + w.values for w in state}
    )
    anchors = {w.key: w.anchor for w in state}
    return QueryResult(
        zigzag.start, zigzag.end, end_table, back_map, graph, sel_attrs, anchors
    )


def graph_table(result: QueryResult, dedup: bool = False) -> Table:
    """The pairing of each end row with the selection row it traces back to,
    one combined tuple per row; `dedup` collapses equal tuples."""
    if not dedup:
        return result.graph
    seen: Dict[Row, None] = {}
    for k in result.graph.keys:
        seen.setdefault(result.graph.rows[k], None)
    return table_from_pairs(None, [(f"g{n}", v) for n, v in enumerate(seen)])


def queries_equal(
    sheaf: Sheaf, z1: Zigzag, z2: Zigzag, selection: Selection
) -> Tuple[bool, Optional[Row]]:
    """Compare two zigzags extensionally on the given data: equal when their
    graph tables carry the same value multiset.  On inequality the witness is
    one tuple whose multiplicities differ."""
    if z1.start != z2.start or z1.end != z2.end:
        raise ZigzagError(
            f"zigzags must share endpoints: ({z1.start!r}->{z1.end!r}) vs "
            f"({z2.start!r}->{z2.end!r})"
        )
    r1 = evaluate(sheaf, z1, selection)
    r2 = evaluate(sheaf, z2, selection)
    c1 = Counter(r1.graph.values())
    c2 = Counter(r2.graph.values())
    if c1 == c2:
        return True, None
    diff = [v for v in set(c1) | set(c2) if c1[v] != c2[v]]
    witness = sorted(diff, key=repr)[0]
    return False, witness
