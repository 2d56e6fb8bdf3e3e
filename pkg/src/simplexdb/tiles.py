"""Tiles: portable single-simplex schema fragments with provenance.

A tile is one top simplex with its closure, a table for the top simplex
(concrete rows or a virtual built-in), and provenance metadata.  Tiles are
the unit of drag-and-drop assembly; a library keeps them by name and can
filter summaries on provenance flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .datatypes import DataTypeRegistry, date, integer
from .documents import (
    FORMAT_VERSION,
    canonical_json,
    datatypes_from_doc,
    datatypes_to_doc,
    parse_document,
    simplices_from_doc,
    simplices_to_doc,
    table_from_doc,
    table_to_doc,
)
from .errors import TileError
from .schema import Schema, closure, make_representable
from .sheaf import slot_datatypes
from .tables import Table, VirtualTable

TileTable = Union[Table, VirtualTable]


@dataclass(frozen=True)
class Provenance:
    """Where a tile came from: free-text source, creation and freshness
    timestamps (ISO-8601), a verification check-mark, and an optional
    trademark line from the issuer."""

    source: str
    created_at: str
    verified: bool = False
    freshness: Optional[str] = None
    trademark: Optional[str] = None

    def __post_init__(self) -> None:
        if self.freshness is None:
            object.__setattr__(self, "freshness", self.created_at)
        if self.created_at > self.freshness:  # type: ignore[operator]
            raise TileError(
                f"provenance created_at {self.created_at!r} is after freshness "
                f"{self.freshness!r}"
            )


@dataclass(frozen=True)
class Tile:
    """A named schema fragment: one top simplex plus its closure, a table
    over the top simplex, and provenance."""

    name: str
    schema: Schema
    top: str
    table: TileTable
    provenance: Provenance

    def __post_init__(self) -> None:
        top = self.schema.simplex(self.top)
        if set(self.schema.simplices) != closure(self.schema, self.top):
            raise TileError(f"tile {self.name!r} is not the closure of {self.top!r}")
        if self.table.simplex != self.top:
            raise TileError(f"tile table must sit on the top simplex {self.top!r}")


def export_tile(tile: Tile) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "name": tile.name,
        "datatypes": datatypes_to_doc(tile.schema.registry),
        "simplices": simplices_to_doc(tile.schema),
        "tables": [table_to_doc(tile.table)],
        "provenance": {
            "source": tile.provenance.source,
            "created_at": tile.provenance.created_at,
            "verified": tile.provenance.verified,
            "freshness": tile.provenance.freshness,
            "trademark": tile.provenance.trademark,
        },
    }
    return canonical_json(doc)


def import_tile(text: str) -> Tile:
    doc = parse_document(text)
    try:
        registry = datatypes_from_doc(doc["datatypes"])
        schema = simplices_from_doc(doc["simplices"], registry)
        (table_doc,) = doc["tables"]
        prov_doc = doc["provenance"]
        provenance = Provenance(
            source=prov_doc["source"],
            created_at=prov_doc["created_at"],
            verified=bool(prov_doc.get("verified", False)),
            freshness=prov_doc.get("freshness"),
            trademark=prov_doc.get("trademark"),
        )
        name = doc["name"]
    except TileError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise TileError(f"malformed tile document: {err}") from err
    table = table_from_doc(table_doc, schema)
    return Tile(name, schema, table.simplex, table, provenance)  # type: ignore[attr-defined]


@dataclass
class TileLibrary:
    tiles: Dict[str, Tile] = field(default_factory=dict)

    def add(self, tile: Tile) -> None:
        self.tiles[tile.name] = tile

    def get(self, name: str) -> Tile:
        try:
            return self.tiles[name]
        except KeyError:
            raise TileError(f"no tile named {name!r}") from None


def list_tiles(
    library: TileLibrary,
    verified: Optional[bool] = None,
    source: Optional[str] = None,
) -> List[dict]:
    """Tile summaries (name, shape, provenance flags), filterable."""
    out = []
    for name in sorted(library.tiles):
        tile = library.tiles[name]
        p = tile.provenance
        if verified is not None and p.verified != verified:
            continue
        if source is not None and source not in p.source:
            continue
        out.append(
            {
                "name": name,
                "dim": tile.schema.simplex(tile.top).dim,
                "virtual": tile.table.is_virtual,
                "source": p.source,
                "created_at": p.created_at,
                "verified": p.verified,
                "freshness": p.freshness,
                "trademark": p.trademark,
            }
        )
    return out


# ---------------------------------------------------------------------------
# built-in tiles


def addition_tile(created_at: str = "2000-01-01") -> Tile:
    """Triangle whose virtual table relates two summands to their sum."""
    registry = DataTypeRegistry.of(integer("integer"))
    schema = make_representable(registry, ["integer", "integer", "integer"], prefix="add")
    table = VirtualTable("add0_1_2", "addition", slot_datatypes(schema, "add0_1_2"))
    prov = Provenance("built-in: addition", created_at, verified=True)
    return Tile("addition", schema, "add0_1_2", table, prov)


def difference_tile(d: int, created_at: str = "2000-01-01") -> Tile:
    """Edge whose virtual table relates s to t with t - s = d."""
    registry = DataTypeRegistry.of(integer("integer"))
    schema = make_representable(registry, ["integer", "integer"], prefix=f"diff{d}_")
    top = f"diff{d}_0_1"
    table = VirtualTable(
        top, "difference", slot_datatypes(schema, top), params=(("d", d),)
    )
    prov = Provenance(f"built-in: difference d={d}", created_at, verified=True)
    return Tile(f"difference-{d}", schema, top, table, prov)


def today_tile(value: str, created_at: Optional[str] = None) -> Tile:
    """One-row, one-column date vertex; the date value is injected by the
    caller, never read from a clock."""
    registry = DataTypeRegistry.of(date("date"))
    schema = make_representable(registry, ["date"], prefix="today")
    table = Table("today0", ("r0",), {"r0": (value,)})
    prov = Provenance("built-in: today's date", created_at or value, verified=True)
    return Tile("today", schema, "today0", table, prov)


def builtin_library(today: Optional[str] = None) -> TileLibrary:
    lib = TileLibrary()
    lib.add(addition_tile())
    for d in (1, 3, 4):
        lib.add(difference_tile(d))
    if today is not None:
        lib.add(today_tile(today))
    return lib
