from __future__ import annotations

import pytest

from simplexdb import (
    DataTypeRegistry,
    date,
    enumerated,
    integer,
    make_representable,
    text,
)


@pytest.fixture
def registry() -> DataTypeRegistry:
    return DataTypeRegistry.of(
        text("First"),
        text("Last"),
        text("SSN"),
        integer("reading"),
        integer("amount"),
        text("person"),
        text("company"),
        text("creation"),
        date("when"),
        enumerated("yesno", ["yes", "no"]),
        enumerated("rgb", ["red", "green", "blue"]),
    )


@pytest.fixture
def person_triangle(registry):
    return make_representable(registry, ["First", "Last", "SSN"])


@pytest.fixture
def desk_schema(registry):
    """Edge (First, Last) attached at its Last vertex to triangle
    (Last, SSN, amount): the last-name lookup shape."""
    from simplexdb import glue

    edge = make_representable(registry, ["First", "Last"], prefix="e")
    tri = make_representable(registry, ["Last", "SSN", "amount"], prefix="t")
    schema, emb_e, emb_t = glue(edge, "e1", tri, "t0")
    return schema, emb_e, emb_t
