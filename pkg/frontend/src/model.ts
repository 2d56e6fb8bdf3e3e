/** Pure workspace-document logic: slot labels, drop compatibility, drawn
 * geometry and hit testing.  Everything here is computed from the documents
 * alone so the canvas never invents state the service does not have. */

import type { Point, SimplexDoc, TileDoc, WorkspaceDoc, ProvenanceDoc } from "./types.js";

export const EPS_FRACTION = 0.02;
const ARC_SAMPLES = 64;

export interface SchemaLike {
  simplices: SimplexDoc[];
}

function byId(schema: SchemaLike): Map<string, SimplexDoc> {
  return new Map(schema.simplices.map((s) => [s.id, s]));
}

/** The vertex occupying each slot, by iterated face deletion (slot k keeps
 * position while other slots are deleted; face i deletes slot i). */
export function vertexSlots(schema: SchemaLike, simplexId: string): string[] {
  const index = byId(schema);
  const top = index.get(simplexId);
  if (!top) throw new Error(`unknown simplex ${simplexId}`);
  const out: string[] = [];
  for (let k = 0; k <= top.dim; k++) {
    let cur = top;
    let pos = k;
    while (cur.dim > 0) {
      const next = pos === cur.dim ? cur.faces[0] : cur.faces[cur.dim];
      if (pos === cur.dim) pos -= 1;
      const s = index.get(next);
      if (!s) throw new Error(`dangling face ${next}`);
      cur = s;
    }
    out.push(cur.id);
  }
  return out;
}

export function slotLabels(schema: SchemaLike, simplexId: string): string[] {
  const index = byId(schema);
  return vertexSlots(schema, simplexId).map((v) => {
    const label = index.get(v)?.label;
    if (!label) throw new Error(`vertex ${v} has no label`);
    return label;
  });
}

function permutations(n: number): number[][] {
  if (n === 0) return [[]];
  const rest = permutations(n - 1);
  const out: number[][] = [];
  for (const p of rest) {
    for (let i = 0; i <= p.length; i++) {
      out.push([...p.slice(0, i), n - 1, ...p.slice(i)]);
    }
  }
  return out.sort((a, b) => a.join(",").localeCompare(b.join(",")));
}

/** All label-preserving slot bijections for attaching tileSimplex onto
 * wsSimplex; empty means the drop is incompatible. */
export function candidateMatchings(
  ws: SchemaLike,
  wsSimplex: string,
  tile: TileDoc,
  tileSimplex: string,
): number[][] {
  const wsIndex = byId(ws);
  const tileIndex = byId(tile);
  const a = wsIndex.get(wsSimplex);
  const b = tileIndex.get(tileSimplex);
  if (!a || !b || a.dim !== b.dim) return [];
  const wsLabels = slotLabels(ws, wsSimplex);
  const tileLabels = slotLabels(tile, tileSimplex);
  return permutations(a.dim + 1).filter((p) =>
    p.every((img, k) => wsLabels[k] === tileLabels[img]),
  );
}

/** Workspace simplices a dragged tile simplex may legally land on. */
export function labelCompatibleTargets(
  ws: SchemaLike,
  tile: TileDoc,
  tileSimplex: string,
): string[] {
  return ws.simplices
    .filter((s) => candidateMatchings(ws, s.id, tile, tileSimplex).length > 0)
    .map((s) => s.id)
    .sort();
}

/** Freshness fades in four discrete steps by age in days. */
export function fadeLevel(provenance: ProvenanceDoc, today: string): number {
  const fresh = provenance.freshness ?? provenance.created_at;
  const age = (Date.parse(today) - Date.parse(fresh)) / 86_400_000;
  if (age <= 30) return 1.0;
  if (age <= 180) return 0.8;
  if (age <= 365) return 0.6;
  return 0.4;
}

// ---------------------------------------------------------------------------
// drawn geometry (mirrors the engine's layout constants)

export interface LayoutLike {
  points: Record<string, [number, number]>;
}

export function layoutScale(layout: LayoutLike): number {
  const pts = Object.values(layout.points);
  if (pts.length < 2) return 1.0;
  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const diag = Math.hypot(Math.max(...xs) - Math.min(...xs), Math.max(...ys) - Math.min(...ys));
  return Math.max(diag, 1.0);
}

export function epsilon(layout: LayoutLike): number {
  return EPS_FRACTION * layoutScale(layout);
}

function parallelIndex(schema: SchemaLike, edgeId: string): number {
  const ends = vertexSlots(schema, edgeId).slice().sort().join("|");
  const group = schema.simplices
    .filter((s) => s.dim === 1 && vertexSlots(schema, s.id).slice().sort().join("|") === ends)
    .map((s) => s.id)
    .sort();
  return group.indexOf(edgeId);
}

/** Polyline of an edge's drawn path, slot-0 end to slot-1 end; parallel
 * edges bow out alternately, loops are circles anchored at their vertex. */
export function edgePath(schema: SchemaLike, layout: LayoutLike, edgeId: string): Point[] {
  const [v0, v1] = vertexSlots(schema, edgeId);
  const p0 = layout.points[v0];
  const p1 = layout.points[v1];
  if (!p0 || !p1) throw new Error(`layout missing ${v0} or ${v1}`);
  const k = parallelIndex(schema, edgeId);
  const scale = layoutScale(layout);
  if (v0 === v1) {
    const radius = (0.12 + 0.08 * k) * scale;
    const angle0 = k * 2.399963;
    const cx = p0[0] + radius * Math.cos(angle0);
    const cy = p0[1] + radius * Math.sin(angle0);
    const start = Math.atan2(p0[1] - cy, p0[0] - cx);
    const out: Point[] = [];
    for (let t = 0; t <= ARC_SAMPLES; t++) {
      const a = start + (2 * Math.PI * t) / ARC_SAMPLES;
      out.push([cx + radius * Math.cos(a), cy + radius * Math.sin(a)]);
    }
    return out;
  }
  if (k === 0) return [p0, p1];
  const bulge = 0.15 * scale * Math.ceil(k / 2) * (k % 2 === 1 ? 1 : -1);
  const mx = (p0[0] + p1[0]) / 2;
  const my = (p0[1] + p1[1]) / 2;
  const dx = p1[0] - p0[0];
  const dy = p1[1] - p0[1];
  const norm = Math.hypot(dx, dy) || 1;
  const ctrl: Point = [mx - (dy / norm) * bulge, my + (dx / norm) * bulge];
  const out: Point[] = [];
  for (let t = 0; t <= ARC_SAMPLES; t++) {
    const u = t / ARC_SAMPLES;
    out.push([
      (1 - u) ** 2 * p0[0] + 2 * (1 - u) * u * ctrl[0] + u ** 2 * p1[0],
      (1 - u) ** 2 * p0[1] + 2 * (1 - u) * u * ctrl[1] + u ** 2 * p1[1],
    ]);
  }
  return out;
}

export function polygonOf(schema: SchemaLike, layout: LayoutLike, simplexId: string): Point[] {
  const pts = Array.from(
    new Map(vertexSlots(schema, simplexId).map((v) => [v, layout.points[v]])).values(),
  );
  const unique = Array.from(new Map(pts.map((p) => [`${p[0]},${p[1]}`, p])).values());
  if (unique.length <= 2) return unique;
  unique.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const cross = (o: Point, a: Point, b: Point) =>
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  const lower: Point[] = [];
  for (const p of unique) {
    while (lower.length >= 2 && cross(lower[lower.length - 2], lower[lower.length - 1], p) <= 0)
      lower.pop();
    lower.push(p);
  }
  const upper: Point[] = [];
  for (const p of unique.slice().reverse()) {
    while (upper.length >= 2 && cross(upper[upper.length - 2], upper[upper.length - 1], p) <= 0)
      upper.pop();
    upper.push(p);
  }
  return [...lower.slice(0, -1), ...upper.slice(0, -1)];
}

function segDist(p: Point, a: Point, b: Point): number {
  const dx = b[0] - a[0];
  const dy = b[1] - a[1];
  const l2 = dx * dx + dy * dy;
  if (l2 < 1e-18) return Math.hypot(p[0] - a[0], p[1] - a[1]);
  const t = Math.max(0, Math.min(1, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2));
  return Math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

function pathDist(path: Point[], p: Point): number {
  let best = Infinity;
  for (let i = 0; i + 1 < path.length; i++) {
    best = Math.min(best, segDist(p, path[i], path[i + 1]));
  }
  return best;
}

function insidePolygon(p: Point, poly: Point[]): boolean {
  if (poly.length < 3) return false;
  let inside = false;
  for (let i = 0; i < poly.length; i++) {
    const [x1, y1] = poly[i];
    const [x2, y2] = poly[(i + 1) % poly.length];
    if (segDist(p, [x1, y1], [x2, y2]) < 1e-12) return true;
    if (y1 > p[1] !== y2 > p[1]) {
      const xc = x1 + ((p[1] - y1) * (x2 - x1)) / (y2 - y1);
      if (p[0] < xc) inside = !inside;
    }
  }
  return inside;
}

/** The simplex whose display region contains the point: lowest dimension
 * first, then the nearest, then the lowest id.  Used for clicks and for
 * drop-target hovering; simplices above dimension 2 have no region. */
export function hitTest(
  schema: SchemaLike,
  layout: LayoutLike,
  p: Point,
): string | null {
  const eps = epsilon(layout);
  let best: [number, number, string] | null = null;
  const consider = (dim: number, dist: number, id: string) => {
    if (best === null || dim < best[0] || (dim === best[0] && (dist < best[1] || (dist === best[1] && id < best[2])))) {
      best = [dim, dist, id];
    }
  };
  for (const s of schema.simplices) {
    if (s.dim === 0) {
      const q = layout.points[s.id];
      const d = Math.hypot(p[0] - q[0], p[1] - q[1]);
      if (d <= eps) consider(0, d, s.id);
    } else if (s.dim === 1) {
      const d = pathDist(edgePath(schema, layout, s.id), p);
      if (d <= eps) consider(1, d, s.id);
    } else if (s.dim === 2) {
      if (insidePolygon(p, polygonOf(schema, layout, s.id))) consider(2, 0, s.id);
    }
  }
  return best ? best[2] : null;
}
