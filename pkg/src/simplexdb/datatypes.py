"""Datatypes for vertex labels and the values that inhabit them.

Four kinds are supported: enumerated (explicit finite value list), integer,
text, and date.  Dates are ISO-8601 calendar date strings and compare
lexicographically; the engine never reads the clock.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Tuple

from .errors import ConformanceError, DataTypeError

ENUMERATED = "enumerated"
INTEGER = "integer"
TEXT = "text"
DATE = "date"

KINDS = (ENUMERATED, INTEGER, TEXT, DATE)


@dataclass(frozen=True)
class DataType:
    """A named value domain usable as a vertex label."""

    name: str
    kind: str
    values: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DataTypeError(f"unknown datatype kind {self.kind!r}")
        if self.kind == ENUMERATED:
            if not self.values:
                raise DataTypeError(
                    f"enumerated datatype {self.name!r} needs a non-empty value list"
                )
            if len(set(self.values)) != len(self.values):
                raise DataTypeError(
                    f"enumerated datatype {self.name!r} has duplicate values"
                )
            object.__setattr__(self, "values", tuple(self.values))
        elif self.values is not None:
            raise DataTypeError(
                f"datatype {self.name!r} of kind {self.kind!r} must not list values"
            )

    @property
    def is_enumerated(self) -> bool:
        return self.kind == ENUMERATED

    def conforms(self, value: object) -> bool:
        """True when `value` is a member of this domain."""
        if self.kind == INTEGER:
            return isinstance(value, int) and not isinstance(value, bool)
        if self.kind == TEXT:
            return isinstance(value, str)
        if self.kind == DATE:
            return isinstance(value, str) and _is_iso_date(value)
        return isinstance(value, str) and value in (self.values or ())

    def check(self, value: object) -> None:
        if not self.conforms(value):
            raise ConformanceError(
                f"value {value!r} does not conform to datatype {self.name!r} ({self.kind})"
            )


def _is_iso_date(text: str) -> bool:
    if len(text) != 10:
        return False
    try:
        _dt.date.fromisoformat(text)
    except ValueError:
        return False
    return True


@dataclass(frozen=True)
class DataTypeRegistry:
    """Immutable name -> DataType map shared by a schema and its sheaf."""

    types: Mapping[str, DataType] = field(default_factory=dict)

    @staticmethod
    def of(*types: DataType) -> "DataTypeRegistry":
        by_name: dict[str, DataType] = {}
        for t in types:
            if t.name in by_name:
                raise DataTypeError(f"duplicate datatype name {t.name!r}")
            by_name[t.name] = t
        return DataTypeRegistry(by_name)

    def get(self, name: str) -> DataType:
        try:
            return self.types[name]
        except KeyError:
            raise DataTypeError(f"unknown datatype {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.types

    def merged(self, other: "DataTypeRegistry") -> "DataTypeRegistry":
        """Union of two registries; same-named types must be identical."""
        out = dict(self.types)
        for name, t in other.types.items():
            if name in out and out[name] != t:
                raise DataTypeError(f"conflicting definitions for datatype {name!r}")
            out[name] = t
        return DataTypeRegistry(out)


def enumerated(name: str, values: Iterable[str]) -> DataType:
    return DataType(name, ENUMERATED, tuple(values))


def integer(name: str) -> DataType:
    return DataType(name, INTEGER)


def text(name: str) -> DataType:
    return DataType(name, TEXT)


def date(name: str) -> DataType:
    return DataType(name, DATE)
