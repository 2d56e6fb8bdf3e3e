"""simplexdb: a tile-based database engine.

Schemas are built by gluing labeled simplices; data lives in a sheaf of
tables over the simplices; queries are paths through the schema's geometric
realization, evaluated as zigzags of projections and pull-backs.
"""

from .datatypes import DataType, DataTypeRegistry, date, enumerated, integer, text
from .schema import (
    Embedding,
    Schema,
    Simplex,
    Violation,
    cofaces,
    faces,
    glue,
    make_representable,
    reassemble,
    schemas_isomorphic,
    star,
    validate_schema,
    vertex_slots,
)
from .sheaf import (
    Sheaf,
    build_sheaf,
    empty_sheaf,
    gamma,
    project_table,
    pushforward_universal,
    set_table,
    validate_sheaf,
)
from .tables import (
    INTERSECT,
    UNION_ALL,
    UNION_DEDUP,
    Table,
    VirtualTable,
    fiber_product,
    table_from_pairs,
    table_from_rows,
    union,
)
from .zigzag import (
    ASCEND,
    DESCEND,
    QueryResult,
    Selection,
    Zigzag,
    ZigzagStep,
    concat_zigzags,
    evaluate,
    graph_table,
    queries_equal,
    validate_zigzag,
    zigzag_from_sequence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
