from __future__ import annotations

import random
from collections import Counter

import pytest

from simplexdb import (
    Table,
    UNION_ALL,
    UNION_DEDUP,
    VirtualTable,
    build_sheaf,
    empty_sheaf,
    fiber_product,
    gamma,
    make_representable,
    project_table,
    pushforward_universal,
    set_table,
    table_from_pairs,
    table_from_rows,
    union,
    validate_sheaf,
)
from simplexdb.errors import ConformanceError, EvaluationError, SheafError
from simplexdb.sheaf import Sheaf, slot_datatypes


def edge_schema(registry, labels=("reading", "reading")):
    return make_representable(registry, list(labels))


# ---------------------------------------------------------------------------
# the universal table


def test_gamma_enumerated_vertex(registry):
    schema = make_representable(registry, ["yesno"])
    g = gamma(schema, "s0")
    assert g.enumerable()
    assert g.enumerate_all() == [("yes",), ("no",)]


def test_gamma_enumerated_edge_is_product(registry):
    schema = edge_schema(registry, ("yesno", "yesno"))
    g = gamma(schema, "s0_1")
    assert len(g.enumerate_all()) == 4


def test_gamma_integer_vertex_not_enumerable(registry):
    schema = make_representable(registry, ["reading"])
    g = gamma(schema, "s0")
    assert not g.enumerable()
    assert g.membership((7,))
    assert not g.membership(("7",))
    with pytest.raises(EvaluationError):
        g.enumerate_all()


# ---------------------------------------------------------------------------
# setting tables and deriving the closure


def test_set_table_derives_vertex_tables(registry):
    schema = edge_schema(registry)
    sheaf = set_table(empty_sheaf(schema), "s0_1", [(10, 13)])
    t0 = sheaf.table("s0")
    t1 = sheaf.table("s1")
    # face 0 deletes slot 0, leaving the slot-1 value
    assert isinstance(t0, Table) and isinstance(t1, Table)
    assert sheaf.table("s0_1").values() == [(10, 13)]
    vertex_values = {t0.values()[0], t1.values()[0]}
    assert vertex_values == {(10,), (13,)}
    assert validate_sheaf(sheaf) == []


def test_set_table_empty_triangle_derives_empty_faces(registry):
    schema = make_representable(registry, ["First", "Last", "SSN"])
    sheaf = set_table(empty_sheaf(schema), "s0_1_2", [])
    for sid in schema.simplices:
        t = sheaf.table(sid)
        assert isinstance(t, Table) and len(t) == 0
    assert validate_sheaf(sheaf) == []


def test_set_table_explicit_keymaps_for_duplicate_rows(registry):
    schema = edge_schema(registry)
    sheaf = empty_sheaf(schema)
    sheaf = set_table(sheaf, "s0", [(10,)])
    sheaf = set_table(sheaf, "s1", [(13,)])
    edge = table_from_pairs("s0_1", [("a", (10, 13)), ("b", (10, 13))])
    # face 0 deletes slot 0: both duplicate rows land on the slot-1 vertex
    sheaf = set_table(
        sheaf,
        "s0_1",
        edge,
        key_maps={0: {"a": "r0", "b": "r0"}, 1: {"a": "r0", "b": "r0"}},
    )
    assert validate_sheaf(sheaf) == []


def test_set_table_rejects_non_commuting_keymaps(registry):
    schema = edge_schema(registry)
    sheaf = empty_sheaf(schema)
    sheaf = set_table(sheaf, "s0", [(10,), (99,)])
    sheaf = set_table(sheaf, "s1", [(13,)])
    edge = table_from_pairs("s0_1", [("a", (10, 13))])
    with pytest.raises(SheafError):
        # face 1 deletes slot 1, so "a" must map to the (10,) row, not (99,)
        set_table(sheaf, "s0_1", edge, key_maps={0: {"a": "r0"}, 1: {"a": "r1"}})


def test_set_table_rejects_non_conforming_tuple(registry):
    schema = edge_schema(registry)
    with pytest.raises(ConformanceError):
        set_table(empty_sheaf(schema), "s0_1", [("ten", 13)])


def test_set_table_rejects_stale_explicit_face(registry):
    schema = edge_schema(registry)
    sheaf = set_table(empty_sheaf(schema), "s0", [(999,)])
    with pytest.raises(SheafError):
        set_table(sheaf, "s0_1", [(10, 13)])


# ---------------------------------------------------------------------------
# projection and push-forward


def test_project_deletes_column(registry):
    schema = edge_schema(registry)
    sheaf = set_table(empty_sheaf(schema), "s0_1", [(10, 13)])
    t = project_table(sheaf, "s0_1", 1, sheaf.table("s0_1"))
    assert t.simplex == "s0"
    assert t.keys == sheaf.table("s0_1").keys
    assert t.values() == [(10,)]


def test_project_person_row(registry):
    schema = make_representable(registry, ["First", "Last", "SSN"])
    sheaf = set_table(empty_sheaf(schema), "s0_1_2", [("Bob", "Smith", "123-45-6789")])
    t = project_table(sheaf, "s0_1_2", 0, sheaf.table("s0_1_2"))
    assert t.values() == [("Smith", "123-45-6789")]


def test_project_empty_table(registry):
    schema = make_representable(registry, ["First", "Last", "SSN"])
    sheaf = set_table(empty_sheaf(schema), "s0_1_2", [])
    t = project_table(sheaf, "s0_1_2", 2, sheaf.table("s0_1_2"))
    assert len(t) == 0


def test_project_face_index_out_of_range(registry):
    schema = edge_schema(registry)
    sheaf = set_table(empty_sheaf(schema), "s0_1", [(10, 13)])
    with pytest.raises(SheafError):
        project_table(sheaf, "s0_1", 5, sheaf.table("s0_1"))


def test_projection_composition_matches_simplicial_identity(registry):
    schema = make_representable(registry, ["First", "Last", "SSN"])
    sheaf = set_table(
        empty_sheaf(schema), "s0_1_2", [("Bob", "Smith", "1"), ("Ann", "Lee", "2")]
    )
    top = sheaf.table("s0_1_2")
    for j in range(3):
        for i in range(j):
            once = project_table(sheaf, "s0_1_2", j, top)
            lhs = project_table(sheaf, once.simplex, i, once)
            other = project_table(sheaf, "s0_1_2", i, top)
            rhs = project_table(sheaf, other.simplex, j - 1, other)
            assert lhs.simplex == rhs.simplex
            assert lhs.rows == rhs.rows


def difference_table(schema, simplex_id, d):
    return VirtualTable(
        simplex_id,
        "difference",
        slot_datatypes(schema, simplex_id),
        params=(("d", d),),
    )


def test_pushforward_along_difference_relation(registry):
    schema = edge_schema(registry)
    sheaf = build_sheaf(schema, {"s0_1": difference_table(schema, "s0_1", 3)})
    start = table_from_rows("s0", [(10,)])
    out = pushforward_universal(sheaf, "s0_1", 1, start)
    assert out.values() == [(10, 13)]


def test_pushforward_completes_addition(registry):
    schema = make_representable(registry, ["reading", "reading", "reading"])
    add = VirtualTable("s0_1_2", "addition", slot_datatypes(schema, "s0_1_2"))
    sheaf = build_sheaf(schema, {"s0_1_2": add})
    summands = table_from_rows("s0_1", [(2, 3)])
    out = pushforward_universal(sheaf, "s0_1_2", 2, summands)
    assert out.values() == [(2, 3, 5)]


def test_pushforward_empty_input(registry):
    schema = edge_schema(registry)
    sheaf = build_sheaf(schema, {"s0_1": difference_table(schema, "s0_1", 3)})
    out = pushforward_universal(sheaf, "s0_1", 0, table_from_rows("s1", []))
    assert len(out) == 0


def test_pushforward_enumerated_slot_uses_whole_type(registry):
    schema = edge_schema(registry, ("yesno", "reading"))
    sheaf = set_table(empty_sheaf(schema), "s1", [(7,)])
    out = pushforward_universal(sheaf, "s0_1", 0, sheaf.table("s1"))
    assert out.values() == [("yes", 7), ("no", 7)]


def test_pushforward_non_enumerable_errors(registry):
    schema = edge_schema(registry)
    sheaf = empty_sheaf(schema)  # gamma over integer slots: nothing to enumerate
    with pytest.raises(EvaluationError):
        pushforward_universal(sheaf, "s0_1", 1, table_from_rows("s0", [(10,)]))


def test_pushforward_then_project_contains_input(registry):
    schema = edge_schema(registry, ("yesno", "rgb"))
    sheaf = empty_sheaf(schema)
    start = table_from_rows("s0", [("yes",), ("yes",), ("no",)])
    up = pushforward_universal(sheaf, "s0_1", 1, start)
    down = project_table(sheaf, "s0_1", 1, up)
    assert Counter(down.values()) >= Counter(start.values())


# ---------------------------------------------------------------------------
# fiber products and unions


def test_fiber_product_is_intersection_without_duplicates(registry):
    t1 = table_from_rows("v", [("x",), ("y",)])
    t2 = table_from_rows("v", [("y",), ("z",)])
    fp = fiber_product(t1, t2)
    assert fp.values() == [("y",)]


def test_fiber_product_multiplies_duplicates(registry):
    t1 = table_from_rows("v", [("v",)] * 2)
    t2 = table_from_rows("v", [("v",)] * 3)
    fp = fiber_product(t1, t2)
    assert len(fp) == 6
    assert set(fp.values()) == {("v",)}


def test_fiber_product_cardinality_law(registry):
    rng = random.Random(7)
    for _ in range(25):
        vals1 = [(rng.randint(0, 3),) for _ in range(rng.randint(0, 8))]
        vals2 = [(rng.randint(0, 3),) for _ in range(rng.randint(0, 8))]
        t1 = table_from_rows("v", vals1)
        t2 = table_from_rows("v", vals2)
        m1, m2 = Counter(vals1), Counter(vals2)
        expected = sum(m1[v] * m2[v] for v in m1)
        assert len(fiber_product(t1, t2)) == expected


def test_fiber_product_gamma_is_neutral(registry):
    schema = make_representable(registry, ["reading"])
    t1 = table_from_rows("s0", [(5,), (6,), (5,)])
    fp = fiber_product(t1, gamma(schema, "s0"))
    assert fp.values() == t1.values()


def test_fiber_product_commutative_and_associative_on_values(registry):
    rng = random.Random(11)
    for _ in range(10):
        tables = [
            table_from_rows("v", [(rng.randint(0, 2),) for _ in range(rng.randint(1, 5))])
            for _ in range(3)
        ]
        a, b, c = tables
        ab_c = fiber_product(fiber_product(a, b), c)
        a_bc = fiber_product(a, fiber_product(b, c))
        ba = fiber_product(b, a)
        assert Counter(ab_c.values()) == Counter(a_bc.values())
        assert Counter(fiber_product(a, b).values()) == Counter(ba.values())


def test_fiber_product_simplex_mismatch(registry):
    with pytest.raises(SheafError):
        fiber_product(table_from_rows("a", [(1,)]), table_from_rows("b", [(1,)]))


def test_union_all_counts(registry):
    t1 = table_from_rows("v", [("x",), ("y",)])
    t2 = table_from_rows("v", [("y",), ("z",), ("w",)])
    assert len(union(t1, t2, UNION_ALL)) == 5


def test_union_dedup_values(registry):
    t1 = table_from_rows("v", [("x",), ("y",)])
    t2 = table_from_rows("v", [("y",), ("z",)])
    out = union(t1, t2, UNION_DEDUP)
    assert out.values() == [("x",), ("y",), ("z",)]
    assert out.has_injective_attrs()


def test_union_with_empty_is_identity_on_values(registry):
    t1 = table_from_rows("v", [("x",), ("x",)])
    empty = table_from_rows("v", [])
    for mode in (UNION_ALL, UNION_DEDUP):
        out = union(t1, empty, mode)
        assert Counter(out.values()) == (
            Counter(t1.values()) if mode == UNION_ALL else Counter(set(t1.values()))
        )


# ---------------------------------------------------------------------------
# sheaf validation


def test_auto_derived_sheaf_validates(registry, desk_schema):
    schema, emb_e, emb_t = desk_schema
    sheaf = set_table(empty_sheaf(schema), emb_t.image("t0_1_2"), [("Smith", "1", 100)])
    sheaf = set_table(sheaf, emb_e.image("e0_1"), [("Bob", "Smith")])
    assert validate_sheaf(sheaf) == []


def test_validate_detects_broken_keymap(registry):
    schema = edge_schema(registry)
    good = set_table(empty_sheaf(schema), "s0_1", [(10, 13), (11, 13)])
    kms = {k: dict(v) for k, v in good.key_maps.items()}
    (edge_key,) = [k for k in good.table("s0_1").keys if good.table("s0_1").rows[k] == (10, 13)]
    kms[("s0_1", 1)][edge_key] = good.key_maps[("s0_1", 1)][
        [k for k in good.table("s0_1").keys if k != edge_key][0]
    ]
    broken = Sheaf(schema, good.tables, kms, good.primary, good.explicit_maps)
    kinds = [v.kind for v in validate_sheaf(broken)]
    assert "non-commuting-keymap" in kinds


def test_validate_detects_type_violation(registry):
    schema = make_representable(registry, ["reading"])
    bad = Sheaf(
        schema,
        {"s0": table_from_rows("s0", [("not a number",)])},
        {},
        frozenset({"s0"}),
        frozenset(),
    )
    kinds = [v.kind for v in validate_sheaf(bad)]
    assert kinds == ["non-conformant-row"]


def test_keymaps_exist_exactly_where_both_concrete(registry, desk_schema):
    schema, emb_e, emb_t = desk_schema
    tri = emb_t.image("t0_1_2")
    sheaf = set_table(empty_sheaf(schema), tri, [("Smith", "1", 100)])
    for (sid, i), _ in sheaf.key_maps.items():
        s = schema.simplex(sid)
        assert isinstance(sheaf.table(sid), Table)
        assert isinstance(sheaf.table(s.faces[i]), Table)
