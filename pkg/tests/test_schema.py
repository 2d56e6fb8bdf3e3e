from __future__ import annotations

import random

import pytest

from simplexdb import (
    DataTypeRegistry,
    Schema,
    Simplex,
    cofaces,
    faces,
    glue,
    integer,
    make_representable,
    reassemble,
    schemas_isomorphic,
    star,
    text,
    validate_schema,
    vertex_slots,
)
from simplexdb.errors import DataTypeError, GlueError, SchemaError


def test_representable_single_vertex(registry):
    s = make_representable(registry, ["SSN"])
    assert len(s.simplices) == 1
    (v,) = s.simplices.values()
    assert v.dim == 0 and v.label == "SSN" and v.faces == ()


def test_representable_triangle_has_seven_simplices(person_triangle):
    # one simplex per non-empty subset of three slots: 2^3 - 1
    assert len(person_triangle.simplices) == 7
    dims = sorted(s.dim for s in person_triangle.simplices.values())
    assert dims == [0, 0, 0, 1, 1, 1, 2]


def test_representable_tetrahedron_counts(registry):
    s = make_representable(registry, ["First", "Last", "SSN", "amount"])
    assert len(s.simplices) == 15
    by_dim = {}
    for x in s.simplices.values():
        by_dim[x.dim] = by_dim.get(x.dim, 0) + 1
    assert by_dim == {0: 4, 1: 6, 2: 4, 3: 1}


def test_representable_unknown_label(registry):
    with pytest.raises(DataTypeError):
        make_representable(registry, ["nope"])


def test_vertex_slots_identity_on_vertex(person_triangle):
    assert vertex_slots(person_triangle, "s0") == ["s0"]


def test_vertex_slots_of_triangle(person_triangle):
    assert vertex_slots(person_triangle, "s0_1_2") == ["s0", "s1", "s2"]
    assert vertex_slots(person_triangle, "s0_2") == ["s0", "s2"]


def test_vertex_slots_loop(registry):
    edge = make_representable(registry, ["person", "person"])
    looped, emb, _ = glue(edge, "s0", edge, "s1")
    loop_edge = emb.image("s0_1")
    slots = vertex_slots(looped, loop_edge)
    assert len(slots) == 2 and slots[0] == slots[1]


def test_faces_and_cofaces(person_triangle):
    assert faces(person_triangle, "s0") == []
    top_faces = faces(person_triangle, "s0_1_2")
    assert [f for _, f in top_faces] == ["s1_2", "s0_2", "s0_1"]
    assert cofaces(person_triangle, "s0_1") == {("s0_1_2", 2)}
    assert cofaces(person_triangle, "s0") == {("s0_1", 1), ("s0_2", 1)}


def test_cofaces_unknown_simplex(person_triangle):
    with pytest.raises(SchemaError):
        cofaces(person_triangle, "missing")


def test_star_includes_iterated_cofaces(desk_schema):
    schema, emb_e, emb_t = desk_schema
    shared = emb_e.image("e1")  # the Last vertex both pieces share
    expected = {
        emb_e.image("e0_1"),  # the (First, Last) edge
        emb_t.image("t0_1"),
        emb_t.image("t0_2"),  # the two triangle edges at Last
        emb_t.image("t0_1_2"),  # the triangle itself
    }
    assert star(schema, shared) == expected


def test_validate_constructed_schemas_clean(registry, person_triangle, desk_schema):
    assert validate_schema(person_triangle) == []
    assert validate_schema(desk_schema[0]) == []


def test_validate_reports_identity_violation(registry):
    # a triangle whose face arrays break face_i(face_j) = face_{j-1}(face_i)
    simplices = {
        "a": Simplex("a", 0, (), "person"),
        "b": Simplex("b", 0, (), "person"),
        "c": Simplex("c", 0, (), "person"),
        "ab": Simplex("ab", 1, ("b", "a")),
        "bc": Simplex("bc", 1, ("c", "b")),
        "ca": Simplex("ca", 1, ("a", "c")),  # reversed faces: breaks the identity
        "t": Simplex("t", 2, ("bc", "ca", "ab")),
    }
    schema = Schema(registry, simplices)
    kinds = [v.kind for v in validate_schema(schema)]
    assert "identity-violation" in kinds


def test_validate_reports_dangling_face(registry):
    schema = Schema(
        registry,
        {
            "a": Simplex("a", 0, (), "person"),
            "e": Simplex("e", 1, ("a", "ghost")),
        },
    )
    report = validate_schema(schema)
    assert [v.kind for v in report] == ["dangling-face"]
    assert "ghost" in report[0].detail


def test_validate_reports_label_problems(registry):
    schema = Schema(
        registry,
        {
            "a": Simplex("a", 0, (), None),
            "b": Simplex("b", 0, (), "unregistered"),
        },
    )
    kinds = sorted(v.kind for v in validate_schema(schema))
    assert kinds == ["missing-label", "unknown-datatype"]


# ---------------------------------------------------------------------------
# gluing


def test_glue_edge_to_triangle_census(desk_schema):
    schema, emb_e, emb_t = desk_schema
    # inclusion-exclusion: 3 + 7 - 1
    assert len(schema.simplices) == 9
    by_dim = {}
    for x in schema.simplices.values():
        by_dim[x.dim] = by_dim.get(x.dim, 0) + 1
    assert by_dim == {0: 4, 1: 4, 2: 1}
    assert emb_e.image("e1") == emb_t.image("t0")
    assert validate_schema(schema) == []


def test_glue_vertex_on_vertex_makes_loop(registry):
    edge = make_representable(registry, ["person", "person"])
    looped, emb, emb2 = glue(edge, "s0", edge, "s1")
    assert len(looped.simplices) == 2
    loop_edge = looped.simplex(emb.image("s0_1"))
    assert loop_edge.faces[0] == loop_edge.faces[1]
    assert validate_schema(looped) == []


def test_glue_rhombus_census(registry):
    interactions = make_representable(registry, ["company", "company", "when"], prefix="i")
    creations = make_representable(registry, ["company", "company", "creation"], prefix="c")
    rhombus, _, _ = glue(interactions, "i0_1", creations, "c0_1")
    by_dim = {}
    for x in rhombus.simplices.values():
        by_dim[x.dim] = by_dim.get(x.dim, 0) + 1
    assert by_dim == {0: 4, 1: 5, 2: 2}
    assert validate_schema(rhombus) == []


def test_glue_rhombus_with_swapped_matching_is_still_valid(registry):
    a = make_representable(registry, ["company", "company", "when"], prefix="i")
    b = make_representable(registry, ["company", "company", "creation"], prefix="c")
    rhombus, _, _ = glue(a, "i0_1", b, "c0_1", matching=(1, 0))
    assert len(rhombus.simplices) == 11
    assert validate_schema(rhombus) == []


def test_glue_dimension_mismatch(registry):
    e = make_representable(registry, ["person", "person"])
    t = make_representable(registry, ["person", "person", "person"], prefix="t")
    with pytest.raises(GlueError):
        glue(e, "s0_1", t, "t0_1_2")


def test_glue_label_mismatch(registry):
    e1 = make_representable(registry, ["person"])
    e2 = make_representable(registry, ["company"], prefix="c")
    with pytest.raises(GlueError):
        glue(e1, "s0", e2, "c0")


def test_glue_unknown_id(registry):
    e = make_representable(registry, ["person"])
    with pytest.raises(SchemaError):
        glue(e, "ghost", e, "s0")


def test_glue_inclusion_exclusion(registry):
    for p, q, d in [(1, 1, 0), (1, 2, 0), (2, 2, 1), (3, 2, 2), (3, 3, 1)]:
        left = make_representable(registry, ["person"] * (p + 1), prefix="l")
        right = make_representable(registry, ["person"] * (q + 1), prefix="r")
        lface = "l" + "_".join(str(i) for i in range(d + 1))
        rface = "r" + "_".join(str(i) for i in range(d + 1))
        out, _, _ = glue(left, lface, right, rface)
        expected = (2 ** (p + 1) - 1) + (2 ** (q + 1) - 1) - (2 ** (d + 1) - 1)
        assert len(out.simplices) == expected
        assert validate_schema(out) == []


def test_glue_commutative_up_to_isomorphism(registry):
    a = make_representable(registry, ["First", "Last"], prefix="a")
    b = make_representable(registry, ["Last", "SSN", "amount"], prefix="b")
    ab, _, _ = glue(a, "a1", b, "b0")
    ba, _, _ = glue(b, "b0", a, "a1")
    assert schemas_isomorphic(ab, ba)


def test_embeddings_cover_and_land_in_result(desk_schema):
    schema, emb_e, emb_t = desk_schema
    for emb, size in ((emb_e, 3), (emb_t, 7)):
        assert len(emb.simplex_map) == size
        for src, dst in emb.simplex_map.items():
            assert dst in schema.simplices


def test_vertex_slots_stable_under_valid_reindexing(registry):
    # the same triangle built either way round reports the same slot labels
    tri = make_representable(registry, ["First", "Last", "SSN"])
    permuted = make_representable(registry, ["SSN", "First", "Last"], prefix="p")
    labels1 = sorted(tri.simplex(v).label for v in vertex_slots(tri, "s0_1_2"))
    labels2 = sorted(permuted.simplex(v).label for v in vertex_slots(permuted, "p0_1_2"))
    assert labels1 == labels2
    assert schemas_isomorphic(tri, permuted)


# ---------------------------------------------------------------------------
# reassembly (colimit of the diagram of simplices)


def test_reassemble_single_vertex(registry):
    s = make_representable(registry, ["person"])
    assert schemas_isomorphic(reassemble(s), s)


def test_reassemble_desk_schema(desk_schema):
    schema, _, _ = desk_schema
    rebuilt = reassemble(schema)
    assert schemas_isomorphic(rebuilt, schema)
    assert sorted(rebuilt.simplices) == sorted(schema.simplices)


def test_reassemble_rhombus(registry):
    a = make_representable(registry, ["company", "company", "when"], prefix="i")
    b = make_representable(registry, ["company", "company", "creation"], prefix="c")
    rhombus, _, _ = glue(a, "i0_1", b, "c0_1", matching=(1, 0))
    assert schemas_isomorphic(reassemble(rhombus), rhombus)


def test_reassemble_loop(registry):
    edge = make_representable(registry, ["person", "person"])
    looped, _, _ = glue(edge, "s0", edge, "s1")
    assert schemas_isomorphic(reassemble(looped), looped)


# ---------------------------------------------------------------------------
# randomized gluing

LABEL_POOL = ["person", "company", "when", "reading"]


def random_glue_step(rng: random.Random, registry, schema: Schema) -> Schema:
    labels = [rng.choice(LABEL_POOL) for _ in range(rng.randint(1, 3))]
    piece = make_representable(registry, labels, prefix=f"n{rng.randint(0, 10**6)}_")
    if not schema.simplices:
        return piece
    dims_available = {}
    for x in schema.simplices.values():
        dims_available.setdefault(x.dim, []).append(x.id)
    from simplexdb.schema import slot_labels

    candidates = []
    for pid in piece.simplices:
        pd = piece.simplex(pid).dim
        for sid in dims_available.get(pd, ()):
            candidates.append((sid, pid))
    rng.shuffle(candidates)
    for sid, pid in candidates:
        l1 = slot_labels(schema, sid)
        l2 = slot_labels(piece, pid)
        perms = [p for p in _perms(len(l1)) if all(l1[k] == l2[p[k]] for k in range(len(l1)))]
        if perms:
            matching = rng.choice(perms)
            out, _, _ = glue(schema, sid, piece, pid, matching)
            return out
    return schema


def _perms(n):
    import itertools

    return list(itertools.permutations(range(n)))


def test_randomized_glue_fuzz_small():
    registry = DataTypeRegistry.of(
        text("person"), text("company"), integer("reading"), text("when")
    )
    rng = random.Random(20260808)
    schema = Schema(registry, {})
    for step in range(25):
        if len(schema.simplices) > 24:
            schema = Schema(registry, {})
        schema = random_glue_step(rng, registry, schema)
        assert validate_schema(schema) == []
    assert schemas_isomorphic(reassemble(schema), schema)
