"""Converting drawn curves into zigzags.

The polyline is sampled at a fixed step (half the display epsilon) by global
arc length and each sample is resolved to a display region; the run-length
compressed region sequence becomes the zigzag.  Sampling by global arc
length makes the conversion invariant under re-sampling of the input
polyline: subdividing segments leaves the geometric path, hence every
sample, unchanged.

Display regions overlap near corners (two edge bands cover the same points
there), so per-sample resolution carries the current region along: among the
regions containing a sample, the tracer prefers ones related to the current
region by iterated faces, then lower dimension, then the nearest, then the
lowest id.  That keeps consecutive regions face-incident through overlap
corridors, which a memoryless lowest-id rule does not.

Short excursions outside every region (under one epsilon of arc) are
dropped as tunneling noise; longer ones are an error.  Face indices are
inferred structurally (lowest index) except at loops, where the travel
direction around the drawn circle decides which end was used: entering at
the slot-s end ascends by face 1-s, leaving through the slot-s end descends
by face 1-s.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CurveError
from .layout import Layout, Point, _region_candidates
from .schema import Schema, closure
from .zigzag import Zigzag, zigzag_from_sequence


def _arc_positions(polyline: Sequence[Point], step: float) -> List[float]:
    total = 0.0
    for a, b in zip(polyline, polyline[1:]):
        total += math.hypot(b[0] - a[0], b[1] - a[1])
    if total <= 0.0:
        return [0.0]
    out = [0.0]
    k = 1
    while k * step < total:
        out.append(k * step)
        k += 1
    out.append(total)
    return out


def _interpolate(polyline: Sequence[Point], arc: float) -> Point:
    run = 0.0
    for a, b in zip(polyline, polyline[1:]):
        seg = math.hypot(b[0] - a[0], b[1] - a[1])
        if seg > 0.0 and run + seg >= arc - 1e-12:
            t = max(0.0, min(1.0, (arc - run) / seg))
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        run += seg
    return polyline[-1]


class _Run:
    __slots__ = ("simplex", "count", "params")

    def __init__(self, simplex: Optional[str]) -> None:
        self.simplex = simplex
        self.count = 0
        self.params: List[float] = []


class _Tracer:
    def __init__(self, schema: Schema) -> None:
        self.schema = schema
        self._closures: Dict[str, frozenset] = {}

    def _closure(self, sid: str) -> frozenset:
        if sid not in self._closures:
            self._closures[sid] = frozenset(closure(self.schema, sid))
        return self._closures[sid]

    def related(self, a: str, b: str) -> bool:
        return a in self._closure(b) or b in self._closure(a)

    def resolve(
        self,
        cands: List[Tuple[int, float, str, Optional[float]]],
        prev: Optional[str],
    ) -> Tuple[str, Optional[float]]:
        def key(c):
            dim, dist, sid, _ = c
            near = 0 if prev is None or sid == prev or self.related(sid, prev) else 1
            return (near, dim, dist, sid)

        _, _, sid, param = min(cands, key=key)
        return sid, param


def curve_to_zigzag(schema: Schema, layout: Layout, polyline: Sequence[Point]) -> Zigzag:
    """Trace a drawn polyline through the layout and build the zigzag of the
    regions it visits."""
    if not polyline:
        raise CurveError("a curve needs at least one point")
    pts = [tuple(p) for p in polyline]
    for v in schema.simplices.values():
        if v.dim == 0:
            layout.point(v.id)  # layout must cover the schema
    eps = layout.epsilon()
    step = eps / 2.0
    tracer = _Tracer(schema)

    runs: List[_Run] = []
    prev: Optional[str] = None
    for arc in _arc_positions(pts, step):
        cands = _region_candidates(schema, layout, _interpolate(pts, arc))
        if not cands:
            sid, param = None, None
        else:
            sid, param = tracer.resolve(cands, prev)
            prev = sid
        if not runs or runs[-1].simplex != sid:
            runs.append(_Run(sid))
        runs[-1].count += 1
        if param is not None:
            runs[-1].params.append(param)

    if runs and runs[0].simplex is None:
        raise CurveError("the curve starts outside every display region")
    if runs and runs[-1].simplex is None:
        raise CurveError("the curve ends outside every display region")

    kept: List[_Run] = []
    for r in runs:
        if r.simplex is None:
            if r.count * step >= eps:
                raise CurveError(
                    f"the curve leaves the realization for {r.count * step:.4f} "
                    f"(more than the {eps:.4f} guard)"
                )
            continue  # tunneling noise: drop the gap
        if kept and kept[-1].simplex == r.simplex:
            kept[-1].count += r.count
            kept[-1].params.extend(r.params)
        else:
            kept.append(r)

    if not kept:
        raise CurveError("the curve never enters a display region")

    sequence = [r.simplex for r in kept]
    face_paths: List[Optional[Tuple[int, ...]]] = [None] * (len(sequence) - 1)
    for n in range(len(sequence) - 1):
        a, b = kept[n], kept[n + 1]
        da = schema.simplex(a.simplex).dim
        db = schema.simplex(b.simplex).dim
        if da == 0 and db == 1:
            face_paths[n] = _loop_face(schema, b, entering=True)
        elif da == 1 and db == 0:
            face_paths[n] = _loop_face(schema, a, entering=False)
    try:
        return zigzag_from_sequence(schema, sequence, face_paths)
    except Exception as err:
        raise CurveError(f"traced regions do not form a path: {err}") from err


def _loop_face(schema: Schema, run: _Run, entering: bool) -> Optional[Tuple[int, ...]]:
    """Face index for a vertex<->edge move; only loops need the geometry."""
    s = schema.simplex(run.simplex)
    if s.faces[0] != s.faces[1] or len(run.params) < 2:
        return None  # not a loop (or too little data): structural inference
    forward = run.params[-1] >= run.params[0]
    if entering:
        # forward travel enters at the slot-0 end: ascend by face 1
        return (1,) if forward else (0,)
    # forward travel exits at the slot-1 end: descend by face 0
    return (0,) if forward else (1,)
