"""Tables over simplices: concrete rows, virtual (computed) tables, and the
value-level combinators (fiber product, unions, column deletion).

A concrete table is an ordered key set plus a tuple of values per key, one
value per vertex slot.  Keys are opaque; distinct keys may carry equal
tuples, so combining tables multiplies multiplicities instead of
intersecting sets.  Virtual tables are never materialized: they answer
membership queries and, where a declared slot subset determines the rest,
enumerate completions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    FrozenSet,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from .datatypes import DataType
from .errors import ConformanceError, DocumentError, EvaluationError, SheafError

Value = object  # int | str, constrained by the slot's DataType
Row = Tuple[Value, ...]

UNION_ALL = "union_all"
UNION_DEDUP = "union_dedup"
INTERSECT = "intersect"


def join_keys(k1: str, k2: str) -> str:
    """Deterministic, collision-free pairing of row keys."""

    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace("&", "\\&")

    return esc(k1) + "&" + esc(k2)


@dataclass(frozen=True)
class Table:
    """Concrete table: ordered keys with one value tuple per key."""

    simplex: Optional[str]
    keys: Tuple[str, ...]
    rows: Mapping[str, Row]

    def __post_init__(self) -> None:
        object.__setattr__(self, "keys", tuple(self.keys))
        rows = {k: tuple(v) for k, v in dict(self.rows).items()}
        object.__setattr__(self, "rows", rows)
        if len(set(self.keys)) != len(self.keys):
            raise SheafError(f"duplicate row keys in table over {self.simplex!r}")
        if set(self.keys) != set(rows):
            raise SheafError(f"keys and rows disagree in table over {self.simplex!r}")

    @property
    def is_virtual(self) -> bool:
        return False

    def __len__(self) -> int:
        return len(self.keys)

    def row(self, key: str) -> Row:
        return self.rows[key]

    def values(self) -> List[Row]:
        """Value tuples in key order (a multiset, not a set)."""
        return [self.rows[k] for k in self.keys]

    def value_multiset(self) -> Counter:
        return Counter(self.values())

    def has_injective_attrs(self) -> bool:
        vals = self.values()
        return len(set(vals)) == len(vals)


def table_from_rows(simplex: Optional[str], rows: Sequence[Row], prefix: str = "r") -> Table:
    keys = tuple(f"{prefix}{i}" for i in range(len(rows)))
    return Table(simplex, keys, dict(zip(keys, (tuple(r) for r in rows))))


def table_from_pairs(simplex: Optional[str], pairs: Sequence[Tuple[str, Row]]) -> Table:
    keys = tuple(k for k, _ in pairs)
    return Table(simplex, keys, {k: tuple(v) for k, v in pairs})


@dataclass(frozen=True)
class VirtualTable:
    """A computed table: membership predicate plus optional finite completion.

    `determining` lists slot subsets that pin down the remaining slots
    (functional flag per subset); built-ins are "gamma" (the universal table
    of everything type-conformant), "addition" (slot2 = slot0 + slot1) and
    "difference" (slot1 - slot0 = d).  Custom predicates are allowed but are
    not serializable.
    """

    simplex: Optional[str]
    builtin: str
    datatypes: Tuple[DataType, ...]
    params: Tuple[Tuple[str, object], ...] = ()
    predicate: Optional[Callable[[Row], bool]] = None
    determining: Tuple[Tuple[FrozenSet[int], bool], ...] = ()
    completer: Optional[Callable[[Dict[int, Value]], List[Row]]] = None

    @property
    def is_virtual(self) -> bool:
        return True

    @property
    def arity(self) -> int:
        return len(self.datatypes)

    def param(self, name: str) -> object:
        for k, v in self.params:
            if k == name:
                return v
        raise KeyError(name)

    def conforms(self, row: Row) -> bool:
        return len(row) == self.arity and all(
            dt.conforms(v) for dt, v in zip(self.datatypes, row)
        )

    def membership(self, row: Row) -> bool:
        if not self.conforms(row):
            return False
        if self.builtin == "gamma":
            return True
        if self.builtin == "addition":
            return row[2] == row[0] + row[1]  # type: ignore[operator]
        if self.builtin == "difference":
            return row[1] - row[0] == self.param("d")  # type: ignore[operator]
        if self.predicate is None:
            raise SheafError(f"virtual table {self.builtin!r} has no membership predicate")
        return bool(self.predicate(row))

    def determining_sets(self) -> List[Tuple[FrozenSet[int], bool]]:
        if self.builtin == "addition":
            return [
                (frozenset({0, 1}), True),
                (frozenset({0, 2}), True),
                (frozenset({1, 2}), True),
            ]
        if self.builtin == "difference":
            return [(frozenset({0}), True), (frozenset({1}), True)]
        return list(self.determining)

    def can_complete(self, missing: FrozenSet[int]) -> bool:
        if not missing:
            return True
        bound = frozenset(range(self.arity)) - missing
        if any(s <= bound for s, _ in self.determining_sets()):
            return True
        return all(self.datatypes[i].is_enumerated for i in missing)

    def complete(self, bindings: Dict[int, Value]) -> List[Row]:
        """All full rows that agree with `bindings`, in deterministic order."""
        missing = frozenset(range(self.arity)) - frozenset(bindings)
        if not missing:
            row = tuple(bindings[i] for i in range(self.arity))
            return [row] if self.membership(row) else []
        bound = frozenset(bindings)
        for s, _functional in self.determining_sets():
            if s <= bound:
                return self._complete_determined(bindings, missing)
        if all(self.datatypes[i].is_enumerated for i in missing):
            out: List[Row] = []
            slots = sorted(missing)
            for combo in itertools.product(*(self.datatypes[i].values for i in slots)):  # type: ignore[arg-type]
                full = dict(bindings)
                full.update(dict(zip(slots, combo)))
                row = tuple(full[i] for i in range(self.arity))
                if self.membership(row):
                    out.append(row)
            return out
        raise EvaluationError(
            f"virtual table {self.builtin!r} cannot complete slots {sorted(missing)}: "
            "no applicable determining set and slot types are not enumerated"
        )

    def _complete_determined(self, bindings: Dict[int, Value], missing: FrozenSet[int]) -> List[Row]:
        if self.builtin == "addition":
            a = bindings.get(0)
            b = bindings.get(1)
            c = bindings.get(2)
            if 2 in missing and len(missing) == 1:
                row = (a, b, a + b)  # type: ignore[operator]
            elif 1 in missing and len(missing) == 1:
                row = (a, c - a, c)  # type: ignore[operator]
            elif 0 in missing and len(missing) == 1:
                row = (c - b, b, c)  # type: ignore[operator]
            else:
                raise EvaluationError("addition table determines exactly one missing slot")
            return [row] if self.membership(row) else []
        if self.builtin == "difference":
            d = self.param("d")
            if missing == frozenset({1}):
                row = (bindings[0], bindings[0] + d)  # type: ignore[operator]
            elif missing == frozenset({0}):
                row = (bindings[1] - d, bindings[1])  # type: ignore[operator]
            else:
                raise EvaluationError("difference table determines exactly one missing slot")
            return [row] if self.membership(row) else []
        if self.completer is None:
            raise EvaluationError(
                f"virtual table {self.builtin!r} declares a determining set but no completer"
            )
        rows = [tuple(r) for r in self.completer(dict(bindings))]
        for r in rows:
            if not self.membership(r):
                raise SheafError(
                    f"completer of virtual table {self.builtin!r} produced non-member row {r!r}"
                )
        return rows

    def enumerable(self) -> bool:
        return all(dt.is_enumerated for dt in self.datatypes)

    def enumerate_all(self) -> List[Row]:
        if not self.enumerable():
            raise EvaluationError(
                f"virtual table {self.builtin!r} is not enumerable: non-enumerated slots"
            )
        out = []
        for combo in itertools.product(*(dt.values for dt in self.datatypes)):  # type: ignore[arg-type]
            if self.membership(combo):
                out.append(combo)
        return out

    def description(self) -> str:
        if self.builtin == "gamma":
            return "every type-conformant row"
        if self.builtin == "addition":
            return "c = a + b"
        if self.builtin == "difference":
            return f"t - s = {self.param('d')}"
        return f"virtual ({self.builtin})"

    def sample_rows(self, count: int = 3) -> List[Row]:
        if self.enumerable():
            return self.enumerate_all()[:count]
        if self.builtin == "addition":
            return [(i, i + 1, 2 * i + 1) for i in range(count)]
        if self.builtin == "difference":
            d = self.param("d")
            return [(i, i + d) for i in range(count)]  # type: ignore[operator]
        return []

    def require_serializable(self) -> None:
        if self.builtin not in ("gamma", "addition", "difference"):
            raise DocumentError(
                f"virtual table {self.builtin!r} is user code and cannot be serialized"
            )


AnyTable = object  # Table | VirtualTable


def check_conformance(datatypes: Sequence[DataType], row: Row) -> None:
    if len(row) != len(datatypes):
        raise ConformanceError(
            f"row {row!r} has {len(row)} values, expected {len(datatypes)}"
        )
    for dt, v in zip(datatypes, row):
        dt.check(v)


def delete_slot(row: Row, slot: int) -> Row:
    return row[:slot] + row[slot + 1 :]


def project_columns(table: Table, slot: int, simplex: Optional[str]) -> Table:
    """Delete one column; keys are unchanged (identity on key maps)."""
    rows = {k: delete_slot(v, slot) for k, v in table.rows.items()}
    return Table(simplex, table.keys, rows)


def fiber_product(t1: AnyTable, t2: AnyTable) -> Table:
    """Rows of t1 paired with rows of t2 carrying an equal value tuple.

    With a virtual argument this filters the concrete side by membership;
    row multiplicity is the product of the two sides' multiplicities.
    """
    if t1.simplex != t2.simplex:  # type: ignore[union-attr]
        raise SheafError(
            f"fiber product across different simplices: {t1.simplex!r} vs {t2.simplex!r}"  # type: ignore[union-attr]
        )
    if isinstance(t1, Table) and isinstance(t2, Table):
        pairs: List[Tuple[str, Row]] = []
        by_value: Dict[Row, List[str]] = {}
        for k2 in t2.keys:
            by_value.setdefault(t2.rows[k2], []).append(k2)
        for k1 in t1.keys:
            v = t1.rows[k1]
            for k2 in by_value.get(v, ()):
                pairs.append((join_keys(k1, k2), v))
        return table_from_pairs(t1.simplex, pairs)
    if isinstance(t1, Table) and isinstance(t2, VirtualTable):
        pairs = [(k, t1.rows[k]) for k in t1.keys if t2.membership(t1.rows[k])]
        return table_from_pairs(t1.simplex, pairs)
    if isinstance(t1, VirtualTable) and isinstance(t2, Table):
        pairs = [(k, t2.rows[k]) for k in t2.keys if t1.membership(t2.rows[k])]
        return table_from_pairs(t2.simplex, pairs)
    raise SheafError("fiber product needs at least one concrete table")


def union(t1: Table, t2: Table, mode: str) -> Table:
    """UNION_ALL keeps every row of both tables; UNION_DEDUP keeps one row
    per distinct value tuple."""
    if not isinstance(t1, Table) or not isinstance(t2, Table):
        raise SheafError("union needs two concrete tables")
    if t1.simplex != t2.simplex:
        raise SheafError(
            f"union across different simplices: {t1.simplex!r} vs {t2.simplex!r}"
        )
    if mode == UNION_ALL:
        rows = [t1.rows[k] for k in t1.keys] + [t2.rows[k] for k in t2.keys]
        return table_from_rows(t1.simplex, rows, prefix="u")
    if mode == UNION_DEDUP:
        seen: Dict[Row, None] = {}
        for t in (t1, t2):
            for k in t.keys:
                seen.setdefault(t.rows[k], None)
        return table_from_rows(t1.simplex, list(seen), prefix="u")
    raise SheafError(f"unknown union mode {mode!r}")
