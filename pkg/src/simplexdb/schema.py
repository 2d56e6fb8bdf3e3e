"""Schemas: semi-simplicial sets with datatype-labeled vertices.

A simplex of dimension n stores an array of n+1 faces; face i is the
(n-1)-simplex obtained by deleting vertex slot i.  Vertex slots are
unordered in spirit (column order carries no meaning), so gluing accepts an
explicit slot bijection and is free to re-order slots of the result; the
stored face arrays always satisfy the simplicial identity

    face_i(face_j(x)) == face_{j-1}(face_i(x))   for i < j.

Gluing is a quotient construction: the matched closures are identified,
identifications propagate transitively, and a backtracking pass picks one
slot order per identified simplex so the identity above survives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .datatypes import DataTypeRegistry
from .errors import GlueError, SchemaError

Node = Tuple[int, str]  # (piece index, simplex id) inside a colimit
Perm = Tuple[int, ...]


@dataclass(frozen=True)
class Simplex:
    """One cell of a schema: a table shape with dim+1 columns."""

    id: str
    dim: int
    faces: Tuple[str, ...] = ()
    label: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "faces", tuple(self.faces))
        if self.dim < 0:
            raise SchemaError(f"simplex {self.id!r} has negative dimension")


@dataclass(frozen=True)
class Schema:
    """An immutable collection of simplices closed under faces."""

    registry: DataTypeRegistry
    simplices: Mapping[str, Simplex] = field(default_factory=dict)

    def simplex(self, simplex_id: str) -> Simplex:
        try:
            return self.simplices[simplex_id]
        except KeyError:
            raise SchemaError(f"unknown simplex {simplex_id!r}") from None

    def __contains__(self, simplex_id: str) -> bool:
        return simplex_id in self.simplices

    def by_dim(self, dim: int) -> List[Simplex]:
        return [s for s in self.simplices.values() if s.dim == dim]

    @property
    def max_dim(self) -> int:
        return max((s.dim for s in self.simplices.values()), default=-1)


@dataclass(frozen=True)
class Violation:
    """One invariant failure found by validate_schema."""

    kind: str
    simplex: str
    detail: str


@dataclass(frozen=True)
class Embedding:
    """How a glued-in schema sits inside the glue result.

    `simplex_map` sends source ids to result ids.  `slot_maps[src][k]` is the
    source slot that ended up as slot k of the result simplex; gluing may
    re-order slots to keep the result's face arrays consistent.
    """

    simplex_map: Dict[str, str]
    slot_maps: Dict[str, Perm]

    def image(self, simplex_id: str) -> str:
        return self.simplex_map[simplex_id]

    def slot_map(self, simplex_id: str) -> Perm:
        return self.slot_maps[simplex_id]


# ---------------------------------------------------------------------------
# construction


def make_representable(
    registry: DataTypeRegistry, labels: Sequence[str], prefix: str = "s"
) -> Schema:
    """The schema freely generated by one top simplex with the given vertex
    labels: one simplex per non-empty subset of the vertex slots."""
    if not labels:
        raise SchemaError("a representable needs at least one vertex label")
    for name in labels:
        registry.get(name)  # raises DataTypeError on unknown names
    n = len(labels) - 1
    simplices: Dict[str, Simplex] = {}
    for size in range(1, n + 2):
        for subset in itertools.combinations(range(n + 1), size):
            sid = _subset_id(prefix, subset)
            if size == 1:
                simplices[sid] = Simplex(sid, 0, (), labels[subset[0]])
            else:
                faces = tuple(
                    _subset_id(prefix, subset[:i] + subset[i + 1 :])
                    for i in range(size)
                )
                simplices[sid] = Simplex(sid, size - 1, faces)
    return Schema(registry, simplices)


def _subset_id(prefix: str, subset: Tuple[int, ...]) -> str:
    return prefix + "_".join(str(k) for k in subset)


# ---------------------------------------------------------------------------
# navigation


def faces(schema: Schema, simplex_id: str) -> List[Tuple[int, str]]:
    """The stored face array as (face_index, simplex id) pairs."""
    s = schema.simplex(simplex_id)
    return list(enumerate(s.faces))


def cofaces(schema: Schema, simplex_id: str) -> Set[Tuple[str, int]]:
    """Every simplex having the argument among its direct faces."""
    schema.simplex(simplex_id)
    out: Set[Tuple[str, int]] = set()
    for s in schema.simplices.values():
        for i, f in enumerate(s.faces):
            if f == simplex_id:
                out.add((s.id, i))
    return out


def star(schema: Schema, simplex_id: str) -> Set[str]:
    """Every simplex that contains the argument as an iterated face."""
    schema.simplex(simplex_id)
    seen: Set[str] = set()
    frontier = {simplex_id}
    while frontier:
        nxt: Set[str] = set()
        for x in frontier:
            for cid, _ in cofaces(schema, x):
                if cid not in seen:
                    seen.add(cid)
                    nxt.add(cid)
        frontier = nxt
    return seen


def closure(schema: Schema, simplex_id: str) -> Set[str]:
    """The simplex itself plus all its iterated faces."""
    s = schema.simplex(simplex_id)
    out = {s.id}
    frontier = [s]
    while frontier:
        x = frontier.pop()
        for fid in x.faces:
            if fid not in out:
                out.add(fid)
                frontier.append(schema.simplex(fid))
    return out


def vertex_slots(schema: Schema, simplex_id: str) -> List[str]:
    """The vertex occupying each slot, computed by iterated face deletion.

    Repeated entries are allowed (loops).  Slot k is found by deleting every
    other slot; the simplicial identities make the deletion order irrelevant.
    """
    s = schema.simplex(simplex_id)
    out: List[str] = []
    for k in range(s.dim + 1):
        cur = s
        pos = k
        while cur.dim > 0:
            if pos == cur.dim:
                cur = schema.simplex(cur.faces[0])
                pos -= 1
            else:
                cur = schema.simplex(cur.faces[cur.dim])
        out.append(cur.id)
    return out


def slot_labels(schema: Schema, simplex_id: str) -> List[str]:
    """Datatype name of each vertex slot."""
    labels = []
    for vid in vertex_slots(schema, simplex_id):
        v = schema.simplex(vid)
        if v.label is None:
            raise SchemaError(f"vertex {vid!r} carries no label")
        labels.append(v.label)
    return labels


# ---------------------------------------------------------------------------
# validation


def validate_schema(schema: Schema) -> List[Violation]:
    """All invariant violations; an empty report means the schema is valid."""
    report: List[Violation] = []
    for s in schema.simplices.values():
        expected = 0 if s.dim == 0 else s.dim + 1
        if len(s.faces) != expected:
            report.append(
                Violation(
                    "face-count",
                    s.id,
                    f"dimension {s.dim} needs {expected} faces, found {len(s.faces)}",
                )
            )
            continue
        if s.dim == 0:
            if s.label is None:
                report.append(Violation("missing-label", s.id, "vertex has no datatype label"))
            elif s.label not in schema.registry:
                report.append(
                    Violation("unknown-datatype", s.id, f"label {s.label!r} is not registered")
                )
        elif s.label is not None:
            report.append(
                Violation("label-on-positive-dim", s.id, "only vertices carry labels")
            )
        dangling = False
        for i, fid in enumerate(s.faces):
            f = schema.simplices.get(fid)
            if f is None:
                report.append(
                    Violation("dangling-face", s.id, f"face {i} references missing id {fid!r}")
                )
                dangling = True
            elif f.dim != s.dim - 1:
                report.append(
                    Violation(
                        "face-dimension",
                        s.id,
                        f"face {i} has dimension {f.dim}, expected {s.dim - 1}",
                    )
                )
                dangling = True
        if dangling or s.dim < 2:
            continue
        for j in range(s.dim + 1):
            fj = schema.simplices.get(s.faces[j])
            for i in range(j):
                fi = schema.simplices.get(s.faces[i])
                if fi is None or fj is None or len(fj.faces) <= i or len(fi.faces) <= j - 1:
                    continue
                if fj.faces[i] != fi.faces[j - 1]:
                    report.append(
                        Violation(
                            "identity-violation",
                            s.id,
                            f"face_{i}(face_{j}) = {fj.faces[i]!r} but "
                            f"face_{j-1}(face_{i}) = {fi.faces[j-1]!r}",
                        )
                    )
    return report


def _require_valid(schema: Schema, role: str) -> None:
    bad = validate_schema(schema)
    if bad:
        raise SchemaError(f"{role} schema is invalid: {bad[0].kind} at {bad[0].simplex}")


# ---------------------------------------------------------------------------
# gluing: quotient of a disjoint union with slot-order repair


def _compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[k] for k in q)


def _invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _face_of_flag(
    pieces: Sequence[Schema], node: Node, perm: Perm, i: int
) -> Tuple[Node, Perm]:
    """Delete slot i of the re-ordered simplex (node, perm)."""
    piece, sid = node
    s = pieces[piece].simplices[sid]
    slot = perm[i]
    child: List[int] = []
    for k in range(len(perm) - 1):
        m = perm[k if k < i else k + 1]
        child.append(m - 1 if m > slot else m)
    return (piece, s.faces[slot]), tuple(child)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[object, object] = {}

    def find(self, x: object) -> object:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: object, b: object) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _colimit(
    registry: DataTypeRegistry,
    pieces: Sequence[Schema],
    seeds: Iterable[Tuple[Node, Node, Perm]],
    max_backtracks: int = 200_000,
) -> Tuple[Schema, Dict[Node, Tuple[str, Perm]]]:
    """Quotient the disjoint union of `pieces` by the identifications that the
    seed matchings generate, then pick slot orders making the result valid."""

    def node_rank(node: Node) -> Tuple[int, str]:
        return node

    def sdim(node: Node) -> int:
        return pieces[node[0]].simplices[node[1]].dim

    # 1. propagate identifications down the matched closures
    uf = _UnionFind()
    for piece_idx, piece in enumerate(pieces):
        for sid in piece.simplices:
            uf.find((piece_idx, sid))
    edges: List[Tuple[Node, Node, Perm]] = []
    seen: Set[Tuple[Node, Node, Perm]] = set()
    work: List[Tuple[Node, Node, Perm]] = list(seeds)
    while work:
        a, b, psi = work.pop()
        if (a, b, psi) in seen:
            continue
        seen.add((a, b, psi))
        seen.add((b, a, _invert(psi)))
        if sdim(a) == 0:
            la = pieces[a[0]].simplices[a[1]].label
            lb = pieces[b[0]].simplices[b[1]].label
            if la != lb:
                raise GlueError(
                    f"label mismatch: cannot identify {a[1]!r} ({la}) with {b[1]!r} ({lb})"
                )
        uf.union(a, b)
        edges.append((a, b, psi))
        if sdim(a) == 0:
            continue
        for i in range(sdim(a) + 1):
            fa, _ = _face_of_flag(pieces, a, tuple(range(sdim(a) + 1)), i)
            fb, _ = _face_of_flag(pieces, b, tuple(range(sdim(b) + 1)), psi[i])
            # child matching: slots of face i of a -> slots of face psi[i] of b
            child: List[int] = []
            for k in range(sdim(a)):
                m = psi[k if k < i else k + 1]
                child.append(m - 1 if m > psi[i] else m)
            work.append((fa, fb, tuple(child)))

    # 2. group nodes into classes
    members: Dict[object, List[Node]] = {}
    for piece_idx, piece in enumerate(pieces):
        for sid in piece.simplices:
            members.setdefault(uf.find((piece_idx, sid)), []).append((piece_idx, sid))
    classes = sorted(
        (sorted(m, key=node_rank) for m in members.values()),
        key=lambda m: (sdim(m[0]), node_rank(m[0])),
    )
    class_of: Dict[Node, int] = {}
    for idx, m in enumerate(classes):
        for node in m:
            class_of[node] = idx

    # 3. flags of each class: re-orderings of members, merged along matchings
    flags_by_class: List[List[List[Tuple[Node, Perm]]]] = []
    edges_by_class: Dict[int, List[Tuple[Node, Node, Perm]]] = {}
    for a, b, psi in edges:
        edges_by_class.setdefault(class_of[a], []).append((a, b, psi))
    for idx, m in enumerate(classes):
        n = sdim(m[0])
        perms = list(itertools.permutations(range(n + 1)))
        fuf = _UnionFind()
        for node in m:
            for p in perms:
                fuf.find((node, p))
        for a, b, psi in edges_by_class.get(idx, ()):
            for p in perms:
                fuf.union((a, p), (b, _compose(psi, p)))
        grouped: Dict[object, List[Tuple[Node, Perm]]] = {}
        for node in m:
            for p in perms:
                grouped.setdefault(fuf.find((node, p)), []).append((node, p))
        flags = [sorted(g, key=lambda np: (node_rank(np[0]), np[1])) for g in grouped.values()]
        flags.sort(key=lambda g: (node_rank(g[0][0]), g[0][1]))
        flags_by_class.append(flags)

    # 4. pick one flag per class so every simplicial identity holds
    chosen: List[Optional[int]] = [None] * len(classes)
    face_arrays: List[Optional[Tuple[int, ...]]] = [None] * len(classes)

    def face_array(idx: int, flag: List[Tuple[Node, Perm]]) -> Tuple[int, ...]:
        node, perm = flag[0]
        n = sdim(node)
        if n == 0:
            return ()
        return tuple(
            class_of[_face_of_flag(pieces, node, perm, i)[0]] for i in range(n + 1)
        )

    def admissible(idx: int, fa: Tuple[int, ...]) -> bool:
        n = len(fa) - 1
        if n < 2:
            return True
        for j in range(n + 1):
            for i in range(j):
                if face_arrays[fa[j]][i] != face_arrays[fa[i]][j - 1]:  # type: ignore[index]
                    return False
        return True

    budget = [max_backtracks]

    def assign(pos: int) -> bool:
        if pos == len(classes):
            return True
        for k, flag in enumerate(flags_by_class[pos]):
            fa = face_array(pos, flag)
            if not admissible(pos, fa):
                continue
            chosen[pos] = k
            face_arrays[pos] = fa
            if assign(pos + 1):
                return True
            budget[0] -= 1
            if budget[0] <= 0:
                raise GlueError("gluing search budget exhausted; no slot assignment found")
        chosen[pos] = None
        face_arrays[pos] = None
        return False

    if not assign(0):
        raise GlueError("no consistent slot assignment exists for this gluing")

    # 5. build the quotient schema with deterministic ids
    used: Set[str] = set()
    new_ids: List[str] = []
    for m in classes:
        base = m[0][1]
        cand, k = base, 1
        while cand in used:
            k += 1
            cand = f"{base}~{k}"
        used.add(cand)
        new_ids.append(cand)

    simplices: Dict[str, Simplex] = {}
    mapping: Dict[Node, Tuple[str, Perm]] = {}
    for idx, m in enumerate(classes):
        flag = flags_by_class[idx][chosen[idx]]  # type: ignore[index]
        node, perm = flag[0]
        n = sdim(node)
        face_ids = tuple(new_ids[c] for c in face_arrays[idx]) if n > 0 else ()  # type: ignore[arg-type]
        label = pieces[node[0]].simplices[node[1]].label if n == 0 else None
        simplices[new_ids[idx]] = Simplex(new_ids[idx], n, face_ids, label)
        for member, p in flag:
            if member not in mapping:
                mapping[member] = (new_ids[idx], p)
    return Schema(registry, simplices), mapping


def _check_matching(
    left: Schema, x1: str, right: Schema, x2: str, matching: Sequence[int]
) -> Perm:
    s1 = left.simplex(x1)
    s2 = right.simplex(x2)
    if s1.dim != s2.dim:
        raise GlueError(
            f"dimension mismatch: {x1!r} has dimension {s1.dim}, {x2!r} has {s2.dim}"
        )
    psi = tuple(matching)
    if sorted(psi) != list(range(s1.dim + 1)):
        raise GlueError(f"slot matching {psi!r} is not a bijection on {s1.dim + 1} slots")
    l1 = slot_labels(left, x1)
    l2 = slot_labels(right, x2)
    for k in range(s1.dim + 1):
        if l1[k] != l2[psi[k]]:
            raise GlueError(
                f"label mismatch at slot {k}: {l1[k]!r} vs {l2[psi[k]]!r} at slot {psi[k]}"
            )
    return psi


def glue(
    left: Schema,
    x1: str,
    right: Schema,
    x2: str,
    matching: Optional[Sequence[int]] = None,
) -> Tuple[Schema, Embedding, Embedding]:
    """Identify the closure of `x1` with the closure of `x2` along a
    label-preserving slot bijection (identity by default).

    When `left` and `right` are the same object the identification happens
    inside one copy, which is how a vertex gets dropped onto another vertex
    of the same edge to form a loop.
    """
    same = left is right
    if matching is None:
        matching = tuple(range(left.simplex(x1).dim + 1))
    psi = _check_matching(left, x1, right, x2, matching)
    _require_valid(left, "left")
    if not same:
        _require_valid(right, "right")
    registry = left.registry if same else left.registry.merged(right.registry)
    pieces: List[Schema] = [left] if same else [left, right]
    right_piece = 0 if same else 1
    seeds = [((0, x1), (right_piece, x2), psi)]
    result, mapping = _colimit(registry, pieces, seeds)
    report = validate_schema(result)
    if report:
        raise GlueError(f"glue produced an invalid schema: {report[0]}")
    left_emb = Embedding(
        {sid: mapping[(0, sid)][0] for sid in left.simplices},
        {sid: mapping[(0, sid)][1] for sid in left.simplices},
    )
    right_emb = Embedding(
        {sid: mapping[(right_piece, sid)][0] for sid in right.simplices},
        {sid: mapping[(right_piece, sid)][1] for sid in right.simplices},
    )
    return result, left_emb, right_emb


def disjoint_union(left: Schema, right: Schema) -> Tuple[Schema, Embedding, Embedding]:
    """Place two schemas side by side with no identifications."""
    _require_valid(left, "left")
    _require_valid(right, "right")
    registry = left.registry.merged(right.registry)
    result, mapping = _colimit(registry, [left, right], [])
    left_emb = Embedding(
        {sid: mapping[(0, sid)][0] for sid in left.simplices},
        {sid: mapping[(0, sid)][1] for sid in left.simplices},
    )
    right_emb = Embedding(
        {sid: mapping[(1, sid)][0] for sid in right.simplices},
        {sid: mapping[(1, sid)][1] for sid in right.simplices},
    )
    return result, left_emb, right_emb


def reassemble(schema: Schema) -> Schema:
    """Rebuild a schema as the union of one representable per simplex, glued
    along every face incidence.  The result is isomorphic to the input and
    reuses its simplex ids."""
    _require_valid(schema, "input")
    if not schema.simplices:
        return Schema(schema.registry, {})
    order = sorted(schema.simplices)
    piece_of: Dict[str, int] = {}
    pieces: List[Schema] = []
    for sid in order:
        piece_of[sid] = len(pieces)
        pieces.append(
            make_representable(schema.registry, slot_labels(schema, sid), prefix="s")
        )
    seeds: List[Tuple[Node, Node, Perm]] = []
    for sid in order:
        s = schema.simplices[sid]
        if s.dim == 0:
            continue
        top_subset = tuple(range(s.dim + 1))
        for i, fid in enumerate(s.faces):
            sub = top_subset[:i] + top_subset[i + 1 :]
            seeds.append(
                (
                    (piece_of[fid], _subset_id("s", tuple(range(s.dim)))),
                    (piece_of[sid], _subset_id("s", sub)),
                    tuple(range(s.dim)),
                )
            )
    result, mapping = _colimit(schema.registry, pieces, seeds)
    # rename classes back to the ids of the original simplices they came from
    rename: Dict[str, str] = {}
    for sid in order:
        top = _subset_id("s", tuple(range(schema.simplices[sid].dim + 1)))
        rename[mapping[(piece_of[sid], top)][0]] = sid
    renamed: Dict[str, Simplex] = {}
    for s in result.simplices.values():
        renamed[rename[s.id]] = Simplex(
            rename[s.id], s.dim, tuple(rename[f] for f in s.faces), s.label
        )
    return Schema(schema.registry, renamed)


# ---------------------------------------------------------------------------
# structural isomorphism


def schemas_isomorphic(a: Schema, b: Schema) -> bool:
    """True when a dimension-, label- and face-preserving bijection exists.

    The bijection may re-order vertex slots per simplex (column order is
    meaningless) but the re-orderings must agree with every face array, which
    is checked slot by slot during the search.
    """
    if len(a.simplices) != len(b.simplices):
        return False
    a_by_dim: Dict[int, List[Simplex]] = {}
    b_by_dim: Dict[int, List[Simplex]] = {}
    for s in a.simplices.values():
        a_by_dim.setdefault(s.dim, []).append(s)
    for s in b.simplices.values():
        b_by_dim.setdefault(s.dim, []).append(s)
    if sorted(a_by_dim) != sorted(b_by_dim):
        return False
    for d in a_by_dim:
        if len(a_by_dim[d]) != len(b_by_dim.get(d, [])):
            return False
    todo = [s.id for d in sorted(a_by_dim) for s in sorted(a_by_dim[d], key=lambda s: s.id)]
    h: Dict[str, str] = {}
    sigma: Dict[str, Perm] = {}
    used: Set[str] = set()

    def induced(sg: Perm, i: int) -> Perm:
        out: List[int] = []
        for k in range(len(sg) - 1):
            m = sg[k if k < i else k + 1]
            out.append(m - 1 if m > sg[i] else m)
        return tuple(out)

    def attempt(pos: int) -> bool:
        if pos == len(todo):
            return True
        x = a.simplices[todo[pos]]
        for y in sorted(b_by_dim[x.dim], key=lambda s: s.id):
            if y.id in used:
                continue
            if x.dim == 0:
                if x.label != y.label:
                    continue
                h[x.id] = y.id
                sigma[x.id] = (0,)
                used.add(y.id)
                if attempt(pos + 1):
                    return True
                del h[x.id], sigma[x.id]
                used.discard(y.id)
                continue
            slots = x.dim + 1
            options: List[List[int]] = []
            for i in range(slots):
                img = h.get(x.faces[i])
                if img is None:
                    options = []
                    break
                options.append([j for j in range(slots) if y.faces[j] == img])
            if not options:
                continue
            for sg in itertools.permutations(range(slots)):
                ok = all(sg[i] in options[i] for i in range(slots))
                if ok:
                    for i in range(slots):
                        if sigma[x.faces[i]] != induced(sg, i):
                            ok = False
                            break
                if not ok:
                    continue
                h[x.id] = y.id
                sigma[x.id] = sg
                used.add(y.id)
                if attempt(pos + 1):
                    return True
                del h[x.id], sigma[x.id]
                used.discard(y.id)
        return False

    return attempt(0)
