"""Geometric realization, deterministic 2-D layout, and point location.

The realization of an n-simplex is the standard simplex in R^{n+1}
(non-negative coordinates summing to one).  For display the schema is laid
out in the plane by a seeded force-directed pass with unit ideal edge
length; loops and parallel edges are drawn as arcs with a fixed offset per
parallel index so each edge owns a clickable region.

Display regions: a vertex owns a disk of radius EPS_FRACTION of the layout
scale, an edge a band of the same half-width around its drawn path, a
2-simplex its polygon interior.  Simplices of dimension 3 and up are drawn
as their 1-skeleton and have no interior region, so curves travel only
through faces of dimension <= 2.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import LayoutError
from .schema import Schema, vertex_slots

Point = Tuple[float, float]

EPS_FRACTION = 0.02  # vertex radius / edge band half-width, relative to scale
LAYOUT_ITERATIONS = 500
ARC_SAMPLES = 64  # polyline resolution of drawn arcs
BARYCENTRIC_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StandardSimplex:
    """The realization of one n-simplex: barycentric coordinate vectors."""

    dim: int

    def membership(self, coords: Sequence[float]) -> bool:
        if len(coords) != self.dim + 1:
            return False
        if any(c < -BARYCENTRIC_TOLERANCE for c in coords):
            return False
        return abs(sum(coords) - 1.0) <= BARYCENTRIC_TOLERANCE

    def vertex(self, k: int) -> Tuple[float, ...]:
        return tuple(1.0 if i == k else 0.0 for i in range(self.dim + 1))


def standard_simplex(n: int) -> StandardSimplex:
    if n < 0:
        raise LayoutError("a standard simplex needs dimension >= 0")
    return StandardSimplex(n)


@dataclass(frozen=True)
class Layout:
    """Vertex positions for one schema; everything else derives from them."""

    points: Dict[str, Point] = field(default_factory=dict)

    def point(self, vertex_id: str) -> Point:
        try:
            return self.points[vertex_id]
        except KeyError:
            raise LayoutError(f"layout has no point for vertex {vertex_id!r}") from None

    def scale(self) -> float:
        if len(self.points) < 2:
            return 1.0
        xs = [p[0] for p in self.points.values()]
        ys = [p[1] for p in self.points.values()]
        diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
        return max(diag, 1.0)

    def epsilon(self) -> float:
        return EPS_FRACTION * self.scale()


def layout_schema(schema: Schema, seed: int) -> Layout:
    """Seeded force-directed placement: identical input gives identical
    output.  Edges pull toward unit length, all vertex pairs repel."""
    vertices = sorted(s.id for s in schema.simplices.values() if s.dim == 0)
    if not vertices:
        return Layout({})
    rng = random.Random(seed)
    pos: Dict[str, List[float]] = {
        v: [rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)] for v in vertices
    }
    if len(vertices) == 1:
        return Layout({vertices[0]: (0.0, 0.0)})

    springs: List[Tuple[str, str]] = []
    for s in sorted(schema.simplices.values(), key=lambda s: s.id):
        if s.dim != 1:
            continue
        a, b = vertex_slots(schema, s.id)
        if a != b:
            springs.append((a, b))

    temperature = 0.15
    for _ in range(LAYOUT_ITERATIONS):
        force: Dict[str, List[float]] = {v: [0.0, 0.0] for v in vertices}
        for i, a in enumerate(vertices):
            for b in vertices[i + 1 :]:
                dx = pos[a][0] - pos[b][0]
                dy = pos[a][1] - pos[b][1]
                d = math.hypot(dx, dy)
                if d < 1e-9:
                    # deterministic nudge for coincident points
                    dx, dy, d = 1e-6 * (i + 1), 1e-6, 2e-6
                f = 0.05 / (d * d)
                force[a][0] += f * dx / d
                force[a][1] += f * dy / d
                force[b][0] -= f * dx / d
                force[b][1] -= f * dy / d
        for a, b in springs:
            dx = pos[b][0] - pos[a][0]
            dy = pos[b][1] - pos[a][1]
            d = math.hypot(dx, dy)
            if d < 1e-9:
                continue
            f = 2.0 * (d - 1.0)
            force[a][0] += f * dx / d
            force[a][1] += f * dy / d
            force[b][0] -= f * dx / d
            force[b][1] -= f * dy / d
        for v in vertices:
            fx, fy = force[v]
            mag = math.hypot(fx, fy)
            if mag < 1e-12:
                continue
            step = min(mag, temperature)
            pos[v][0] += fx / mag * step
            pos[v][1] += fy / mag * step
        temperature *= 0.995

    cx = sum(p[0] for p in pos.values()) / len(pos)
    cy = sum(p[1] for p in pos.values()) / len(pos)
    return Layout({v: (pos[v][0] - cx, pos[v][1] - cy) for v in vertices})


# ---------------------------------------------------------------------------
# drawn geometry


def _parallel_index(schema: Schema, edge_id: str) -> int:
    ends = frozenset(vertex_slots(schema, edge_id))
    group = sorted(
        s.id
        for s in schema.simplices.values()
        if s.dim == 1 and frozenset(vertex_slots(schema, s.id)) == ends
    )
    return group.index(edge_id)


def edge_path(schema: Schema, layout: Layout, edge_id: str) -> List[Point]:
    """The drawn polyline of an edge, from its slot-0 end to its slot-1 end.

    Parallel edges bow out alternately; loops are circles anchored at their
    vertex, oriented counterclockwise from the slot-0 end.
    """
    s = schema.simplex(edge_id)
    if s.dim != 1:
        raise LayoutError(f"{edge_id!r} is not an edge")
    v0, v1 = vertex_slots(schema, edge_id)
    p0, p1 = layout.point(v0), layout.point(v1)
    k = _parallel_index(schema, edge_id)
    scale = layout.scale()
    if v0 == v1:
        radius = (0.12 + 0.08 * k) * scale
        angle0 = k * 2.399963
        cx = p0[0] + radius * math.cos(angle0)
        cy = p0[1] + radius * math.sin(angle0)
        start = math.atan2(p0[1] - cy, p0[0] - cx)
        return [
            (
                cx + radius * math.cos(start + 2.0 * math.pi * t / ARC_SAMPLES),
                cy + radius * math.sin(start + 2.0 * math.pi * t / ARC_SAMPLES),
            )
            for t in range(ARC_SAMPLES + 1)
        ]
    if k == 0:
        return [p0, p1]
    bulge = 0.15 * scale * ((k + 1) // 2) * (1 if k % 2 else -1)
    mx, my = (p0[0] + p1[0]) / 2.0, (p0[1] + p1[1]) / 2.0
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    norm = math.hypot(dx, dy) or 1.0
    ctrl = (mx - dy / norm * bulge, my + dx / norm * bulge)
    out: List[Point] = []
    for t in range(ARC_SAMPLES + 1):
        u = t / ARC_SAMPLES
        x = (1 - u) ** 2 * p0[0] + 2 * (1 - u) * u * ctrl[0] + u**2 * p1[0]
        y = (1 - u) ** 2 * p0[1] + 2 * (1 - u) * u * ctrl[1] + u**2 * p1[1]
        out.append((x, y))
    return out


def polygon(schema: Schema, layout: Layout, simplex_id: str) -> List[Point]:
    """Convex hull of the simplex's vertex positions."""
    pts = sorted({layout.point(v) for v in vertex_slots(schema, simplex_id)})
    if len(pts) <= 2:
        return pts
    def cross(o: Point, a: Point, b: Point) -> float:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _dist_point_segment(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 < 1e-18:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _path_distance_and_param(path: Sequence[Point], p: Point) -> Tuple[float, float]:
    """Distance from p to the polyline and the arc parameter (0..1) of the
    nearest point."""
    lengths = [
        math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:])
    ]
    total = sum(lengths) or 1.0
    best = (float("inf"), 0.0)
    run = 0.0
    for (a, b), seg in zip(zip(path, path[1:]), lengths):
        d = _dist_point_segment(p, a, b)
        if d < best[0]:
            ax, ay = a
            dx, dy = b[0] - ax, b[1] - ay
            L2 = dx * dx + dy * dy
            t = 0.0 if L2 < 1e-18 else max(
                0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2)
            )
            best = (d, (run + t * seg) / total)
        run += seg
    return best


def _point_in_polygon(p: Point, poly: Sequence[Point]) -> bool:
    if len(poly) < 3:
        return False
    x, y = p
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if _dist_point_segment(p, (x1, y1), (x2, y2)) < 1e-12:
            return True  # boundary counts as inside
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xc:
                inside = not inside
    return inside


def _region_candidates(
    schema: Schema, layout: Layout, p: Point
) -> List[Tuple[int, float, str, Optional[float]]]:
    """Every region containing p as (dim, distance, id, edge parameter)."""
    eps = layout.epsilon()
    out: List[Tuple[int, float, str, Optional[float]]] = []
    for s in sorted(schema.simplices.values(), key=lambda s: (s.dim, s.id)):
        if s.dim == 0:
            q = layout.point(s.id)
            d = math.hypot(p[0] - q[0], p[1] - q[1])
            if d <= eps:
                out.append((0, d, s.id, None))
        elif s.dim == 1:
            d, t = _path_distance_and_param(edge_path(schema, layout, s.id), p)
            if d <= eps:
                out.append((1, d, s.id, t))
        elif s.dim == 2:
            if _point_in_polygon(p, polygon(schema, layout, s.id)):
                out.append((2, 0.0, s.id, None))
        # dim >= 3: drawn as 1-skeleton, no interior region
    return out


def locate_point(schema: Schema, layout: Layout, p: Point) -> Optional[str]:
    """The lowest-dimensional simplex whose display region contains p, ties
    broken by lowest id; None when p is outside every region."""
    cands = _region_candidates(schema, layout, p)
    if not cands:
        return None
    return min(cands, key=lambda c: (c[0], c[2]))[2]


def _locate_for_tracer(
    schema: Schema, layout: Layout, p: Point
) -> Optional[Tuple[str, Optional[float]]]:
    """Like locate_point but ties among equal-dimension regions go to the
    nearest one, so a curve passing a corner stays with the edge it hugs."""
    cands = _region_candidates(schema, layout, p)
    if not cands:
        return None
    dim, _, sid, param = min(cands, key=lambda c: (c[0], c[1], c[2]))
    return sid, param
