/** Rendering: workspace document -> display list -> canvas.
 *
 * The display list is plain data so it can be tested without a browser;
 * paint() is the only code that touches a 2D context.  One region per
 * simplex of dimension <= 2; higher simplices appear through their
 * 1-skeleton only.  Loops and parallel edges draw as arcs. */

import { edgePath, polygonOf, epsilon, fadeLevel } from "./model.js";
import type { CanvasState } from "./state.js";
import type { Point, WorkspaceDoc } from "./types.js";

export interface PolygonShape {
  kind: "polygon";
  simplex: string;
  points: Point[];
  highlighted: boolean;
  opacity: number;
}

export interface PathShape {
  kind: "path";
  simplex: string;
  points: Point[];
  highlighted: boolean;
  opacity: number;
}

export interface DiskShape {
  kind: "disk";
  simplex: string;
  center: Point;
  radius: number;
  label: string;
  verified: boolean;
  highlighted: boolean;
  opacity: number;
}

export interface CurveShape {
  kind: "curve";
  points: Point[];
}

export type Shape = PolygonShape | PathShape | DiskShape | CurveShape;

const TODAY_FALLBACK = "2026-01-01";

export function displayList(doc: WorkspaceDoc, state?: CanvasState, today?: string): Shape[] {
  const shapes: Shape[] = [];
  const layout = doc.layout;
  const eps = epsilon(layout);
  const highlights = new Set(Object.keys(state?.pendingDrop?.targets ?? {}));
  const hover = state?.pendingDrop?.hover ?? null;
  const day = today ?? TODAY_FALLBACK;

  const opacityOf = (simplex: string): number => {
    const prov = doc.provenance[simplex];
    return prov ? fadeLevel(prov, day) : 1.0;
  };

  const twos = doc.simplices.filter((s) => s.dim === 2).sort((a, b) => a.id.localeCompare(b.id));
  for (const s of twos) {
    shapes.push({
      kind: "polygon",
      simplex: s.id,
      points: polygonOf(doc, layout, s.id),
      highlighted: highlights.has(s.id) || hover === s.id,
      opacity: opacityOf(s.id),
    });
  }
  const ones = doc.simplices.filter((s) => s.dim === 1).sort((a, b) => a.id.localeCompare(b.id));
  for (const s of ones) {
    shapes.push({
      kind: "path",
      simplex: s.id,
      points: edgePath(doc, layout, s.id),
      highlighted: highlights.has(s.id) || hover === s.id,
      opacity: opacityOf(s.id),
    });
  }
  const zeros = doc.simplices.filter((s) => s.dim === 0).sort((a, b) => a.id.localeCompare(b.id));
  for (const s of zeros) {
    shapes.push({
      kind: "disk",
      simplex: s.id,
      center: layout.points[s.id],
      radius: eps,
      label: s.label ?? "",
      verified: doc.provenance[s.id]?.verified ?? false,
      highlighted: highlights.has(s.id) || hover === s.id,
      opacity: opacityOf(s.id),
    });
  }
  if (state?.polyline && state.polyline.length > 1) {
    shapes.push({ kind: "curve", points: state.polyline });
  }
  return shapes;
}

export interface Camera {
  offsetX: number;
  offsetY: number;
  zoom: number;
}

export function fitCamera(doc: WorkspaceDoc, width: number, height: number): Camera {
  const pts = Object.values(doc.layout.points);
  if (pts.length === 0) return { offsetX: width / 2, offsetY: height / 2, zoom: 100 };
  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  const zoom = Math.min(width / (spanX * 1.6), height / (spanY * 1.6), 220);
  const cx = (Math.max(...xs) + Math.min(...xs)) / 2;
  const cy = (Math.max(...ys) + Math.min(...ys)) / 2;
  return { offsetX: width / 2 - cx * zoom, offsetY: height / 2 + cy * zoom, zoom };
}

export function toScreen(cam: Camera, p: Point): Point {
  return [cam.offsetX + p[0] * cam.zoom, cam.offsetY - p[1] * cam.zoom];
}

export function toWorld(cam: Camera, p: Point): Point {
  return [(p[0] - cam.offsetX) / cam.zoom, (cam.offsetY - p[1]) / cam.zoom];
}

export function paint(ctx: CanvasRenderingContext2D, cam: Camera, shapes: Shape[]): void {
  for (const shape of shapes) {
    if (shape.kind === "polygon") {
      if (shape.points.length < 3) continue;
      ctx.globalAlpha = 0.25 * shape.opacity;
      ctx.fillStyle = shape.highlighted ? "#7cc3ff" : "#9fd0a0";
      ctx.beginPath();
      shape.points.forEach((p, i) => {
        const [x, y] = toScreen(cam, p);
        i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
      });
      ctx.closePath();
      ctx.fill();
    } else if (shape.kind === "path") {
      ctx.globalAlpha = shape.opacity;
      ctx.strokeStyle = shape.highlighted ? "#1f7ae0" : "#444";
      ctx.lineWidth = shape.highlighted ? 4 : 2;
      ctx.beginPath();
      shape.points.forEach((p, i) => {
        const [x, y] = toScreen(cam, p);
        i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
      });
      ctx.stroke();
    } else if (shape.kind === "disk") {
      ctx.globalAlpha = shape.opacity;
      const [x, y] = toScreen(cam, shape.center);
      ctx.fillStyle = shape.highlighted ? "#1f7ae0" : "#222";
      ctx.beginPath();
      ctx.arc(x, y, Math.max(5, shape.radius * cam.zoom), 0, 2 * Math.PI);
      ctx.fill();
      ctx.font = "12px sans-serif";
      ctx.fillStyle = "#333";
      ctx.fillText(shape.label + (shape.verified ? " ✓" : ""), x + 8, y - 8);
    } else {
      ctx.globalAlpha = 1;
      ctx.strokeStyle = "#d0342c";
      ctx.lineWidth = 2;
      ctx.setLineDash([6, 4]);
      ctx.beginPath();
      shape.points.forEach((p, i) => {
        const [x, y] = toScreen(cam, p);
        i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
      });
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }
  ctx.globalAlpha = 1;
}
