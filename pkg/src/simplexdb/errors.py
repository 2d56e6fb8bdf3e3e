"""Exception hierarchy for simplexdb.

Validation problems found in *data* (a schema or sheaf that fails its
invariants) are reported as violation lists, not exceptions; exceptions are
reserved for misuse of an operation (unknown ids, mismatched arguments,
malformed documents).
"""


class SimplexDBError(Exception):
    """Base class for all engine errors."""


class DataTypeError(SimplexDBError):
    """Unknown datatype name, or an ill-formed datatype definition."""


class SchemaError(SimplexDBError):
    """Unknown simplex id or an operation applied to an invalid schema."""


class GlueError(SchemaError):
    """Gluing failed: dimension mismatch, label mismatch, or no consistent
    slot assignment exists for the quotient."""


class SheafError(SimplexDBError):
    """Table or key-map violates the sheaf contract."""


class ConformanceError(SheafError):
    """A value or tuple does not conform to its datatype(s)."""


class ZigzagError(SimplexDBError):
    """Ill-formed zigzag: non-incident simplices or bad face indices."""


class EvaluationError(SimplexDBError):
    """Query evaluation cannot proceed (missing table, non-enumerable
    completion, selection mismatch)."""


class LayoutError(SimplexDBError):
    """Layout or point-location misuse."""


class CurveError(SimplexDBError):
    """A drawn curve cannot be converted to a zigzag."""


class DocumentError(SimplexDBError):
    """Malformed or version-mismatched persistence document."""


class TileError(SimplexDBError):
    """Ill-formed tile or illegal tile operation."""
