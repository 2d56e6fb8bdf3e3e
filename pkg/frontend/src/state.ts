/** Canvas interaction state and its transitions.
 *
 * The state machine is pure: pointer events go in, service request payloads
 * come out.  Nothing here mutates the workspace; every schema or data change
 * is a request the caller sends through the ApiClient, after which the
 * workspace document is re-fetched and this state re-seeded. */

import { candidateMatchings, hitTest } from "./model.js";
import type {
  AttachmentDoc,
  Point,
  Policy,
  QueryResponse,
  SelectionDoc,
  TileDoc,
  WorkspaceDoc,
} from "./types.js";

export interface DropTarget {
  /** which tile simplex lands on this workspace simplex */
  tileSimplex: string;
  matchings: number[][];
}

export interface PendingDrop {
  tile: TileDoc;
  /** label-compatible workspace simplices (highlighted while dragging),
   * each with the tile simplex that would attach there */
  targets: Record<string, DropTarget>;
  hover: string | null;
}

export interface CanvasState {
  workspaceId: string;
  doc: WorkspaceDoc | null;
  selection: { simplex: string; keys: string[] } | null;
  polyline: Point[] | null;
  pendingDrop: PendingDrop | null;
  lastResult: QueryResponse | null;
  dedup: boolean;
}

export function initialState(workspaceId: string): CanvasState {
  return {
    workspaceId,
    doc: null,
    selection: null,
    polyline: null,
    pendingDrop: null,
    lastResult: null,
    dedup: false,
  };
}

export function withWorkspace(state: CanvasState, doc: WorkspaceDoc): CanvasState {
  return { ...state, doc };
}

/** Picking a tile up from the library: compute every legal drop target once,
 * from the workspace document alone.  A tile may attach by any of its
 * simplices; each workspace simplex gets the highest-dimensional (then
 * lowest-id) tile simplex that fits it. */
export function beginDrag(state: CanvasState, tile: TileDoc): CanvasState {
  if (!state.doc) throw new Error("no workspace loaded");
  const targets: Record<string, DropTarget> = {};
  const tileSimplices = [...tile.simplices].sort(
    (a, b) => b.dim - a.dim || a.id.localeCompare(b.id),
  );
  for (const ws of state.doc.simplices) {
    for (const ts of tileSimplices) {
      if (ts.dim !== ws.dim) continue;
      const matchings = candidateMatchings(state.doc, ws.id, tile, ts.id);
      if (matchings.length > 0) {
        targets[ws.id] = { tileSimplex: ts.id, matchings };
        break;
      }
    }
  }
  return { ...state, pendingDrop: { tile, targets, hover: null } };
}

export function topSimplexOf(tile: TileDoc): string {
  let best = tile.simplices[0];
  for (const s of tile.simplices) if (s.dim > best.dim) best = s;
  return best.id;
}

/** Dragging over the canvas: the hover target is the hit simplex when it is
 * label-compatible, else nothing (visual rejection). */
export function dragOver(state: CanvasState, p: Point): CanvasState {
  if (!state.pendingDrop || !state.doc) return state;
  const hit = hitTest(state.doc, state.doc.layout, p);
  const legal = hit !== null && hit in state.pendingDrop.targets;
  return {
    ...state,
    pendingDrop: { ...state.pendingDrop, hover: legal ? hit : null },
  };
}

export type DropOutcome =
  | { kind: "rejected" }
  | { kind: "detached"; request: DropRequest }
  | { kind: "attach"; request: DropRequest; needsPolicy: boolean };

export interface DropRequest {
  tile: TileDoc;
  attachment: AttachmentDoc | null;
  policy: Policy | null;
}

/** Releasing the tile.  Off-canvas releases with no hover drop the tile
 * detached; a hover over a compatible simplex builds the attachment from
 * the first candidate matching.  `needsPolicy` is true when both sides
 * carry concrete tables, which the caller resolves by prompting. */
export function releaseDrop(
  state: CanvasState,
  targetIsConcrete: boolean,
  detachedAllowed = true,
): { state: CanvasState; outcome: DropOutcome } {
  const pending = state.pendingDrop;
  if (!pending || !state.doc) return { state, outcome: { kind: "rejected" } };
  const cleared = { ...state, pendingDrop: null };
  if (pending.hover === null) {
    if (!detachedAllowed && state.doc.simplices.length > 0) {
      return { state: cleared, outcome: { kind: "rejected" } };
    }
    return {
      state: cleared,
      outcome: {
        kind: "detached",
        request: { tile: pending.tile, attachment: null, policy: null },
      },
    };
  }
  const target = pending.targets[pending.hover];
  const matching = target?.matchings[0];
  if (!target || !matching) return { state: cleared, outcome: { kind: "rejected" } };
  const tileIsConcrete = pending.tile.tables.some(
    (t) => t.simplex === target.tileSimplex && !("virtual" in t),
  );
  return {
    state: cleared,
    outcome: {
      kind: "attach",
      request: {
        tile: pending.tile,
        attachment: {
          workspace_simplex: pending.hover,
          tile_simplex: target.tileSimplex,
          matching,
        },
        policy: null,
      },
      needsPolicy: targetIsConcrete && tileIsConcrete,
    },
  };
}

/** Clicking a simplex selects it for inspection; choosing rows arms the
 * query start point. */
export function selectRows(state: CanvasState, simplex: string, keys: string[]): CanvasState {
  return { ...state, selection: { simplex, keys } };
}

export function startCurve(state: CanvasState, p: Point): CanvasState {
  if (!state.selection) throw new Error("choose rows before drawing a query curve");
  return { ...state, polyline: [p] };
}

/** Pointer samples are forwarded unmodified; the engine owns all geometric
 * interpretation of the curve. */
export function extendCurve(state: CanvasState, p: Point): CanvasState {
  if (!state.polyline) return state;
  return { ...state, polyline: [...state.polyline, p] };
}

export interface CurveQueryRequest {
  polyline: Point[];
  selection: SelectionDoc;
  dedup: boolean;
}

export function finishCurve(state: CanvasState): { state: CanvasState; request: CurveQueryRequest } {
  if (!state.polyline || state.polyline.length === 0) throw new Error("no curve in progress");
  if (!state.selection) throw new Error("choose rows before drawing a query curve");
  const request: CurveQueryRequest = {
    polyline: state.polyline,
    selection: { simplex: state.selection.simplex, keys: state.selection.keys },
    dedup: state.dedup,
  };
  return { state: { ...state, polyline: null }, request };
}

export function withResult(state: CanvasState, result: QueryResponse): CanvasState {
  return { ...state, lastResult: result };
}
