/** Browser bootstrap: wires the library panel, the canvas, the inspector,
 * and pointer gestures to the pure state machine and the API client. */

import { ApiClient, ApiError } from "./api.js";
import { hitTest } from "./model.js";
import { displayList, fitCamera, paint, toWorld, type Camera } from "./render.js";
import {
  beginDrag,
  dragOver,
  extendCurve,
  finishCurve,
  initialState,
  releaseDrop,
  selectRows,
  startCurve,
  withResult,
  withWorkspace,
  type CanvasState,
} from "./state.js";
import { buildResultView, buildTableView } from "./tableview.js";
import type { Policy, TileSummary } from "./types.js";

const api = new ApiClient("");
const workspaceId = new URLSearchParams(location.search).get("workspace") ?? "default";
const today = new Date().toISOString().slice(0, 10);

let state: CanvasState = initialState(workspaceId);
let camera: Camera = { offsetX: 0, offsetY: 0, zoom: 100 };
let drawing = false;

const canvas = document.getElementById("canvas") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const libraryEl = document.getElementById("library")!;
const inspectorEl = document.getElementById("inspector")!;
const resultEl = document.getElementById("result")!;
const statusEl = document.getElementById("status")!;
const dedupToggle = document.getElementById("dedup") as HTMLInputElement;

function status(text: string, isError = false): void {
  statusEl.textContent = text;
  statusEl.className = isError ? "error" : "";
}

function repaint(): void {
  if (!state.doc) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  paint(ctx, camera, displayList(state.doc, state, today));
}

async function refresh(): Promise<void> {
  const doc = await api.getWorkspace(workspaceId);
  state = withWorkspace(state, doc);
  camera = fitCamera(doc, canvas.width, canvas.height);
  repaint();
}

async function loadLibrary(): Promise<void> {
  const { tiles } = await api.listTiles();
  libraryEl.replaceChildren();
  for (const tile of tiles) {
    libraryEl.appendChild(tileCard(tile));
  }
}

function tileCard(summary: TileSummary): HTMLElement {
  const card = document.createElement("div");
  card.className = "tile-card";
  const name = document.createElement("strong");
  name.textContent = summary.name + (summary.verified ? " ✓" : "");
  const kind = document.createElement("span");
  kind.textContent = ` ${summary.dim}-simplex${summary.virtual ? ", computed" : ""}`;
  card.append(name, kind);
  card.addEventListener("click", () => {
    state = beginDrag(state, summary.document);
    status(
      `carrying ${summary.name}: click a highlighted simplex to attach, or empty canvas to place it loose`,
    );
    repaint();
  });
  return card;
}

canvas.addEventListener("pointermove", (ev) => {
  if (!state.doc) return;
  const p = toWorld(camera, [ev.offsetX, ev.offsetY]);
  if (state.pendingDrop) {
    state = dragOver(state, p);
    repaint();
  } else if (drawing) {
    state = extendCurve(state, p);
    repaint();
  }
});

canvas.addEventListener("pointerdown", async (ev) => {
  if (!state.doc) return;
  const p = toWorld(camera, [ev.offsetX, ev.offsetY]);
  if (state.pendingDrop) {
    await completeDrop();
    return;
  }
  if (state.selection && ev.shiftKey) {
    drawing = true;
    state = startCurve(state, p);
    return;
  }
  const hit = hitTest(state.doc, state.doc.layout, p);
  if (hit) await inspect(hit);
});

canvas.addEventListener("pointerup", async () => {
  if (!drawing) return;
  drawing = false;
  try {
    const { state: next, request } = finishCurve(state);
    state = next;
    const result = await api.queryPolyline(
      workspaceId,
      request.polyline,
      request.selection,
      request.dedup,
    );
    state = withResult(state, result);
    resultEl.replaceChildren(
      buildResultView(document, result.graph.rows, request.dedup),
    );
    status(`query ${result.start} → ${result.end}: ${result.graph.rows.length} rows`);
  } catch (err) {
    status(errText(err), true);
  }
  repaint();
});

async function completeDrop(): Promise<void> {
  if (!state.doc || !state.pendingDrop) return;
  const hover = state.pendingDrop.hover;
  let targetIsConcrete = false;
  if (hover) {
    const view = await api.getTable(workspaceId, hover);
    targetIsConcrete = !view.virtual;
  }
  const { state: next, outcome } = releaseDrop(state, targetIsConcrete);
  state = next;
  if (outcome.kind === "rejected") {
    status("that simplex is not label-compatible with the tile", true);
    repaint();
    return;
  }
  let policy: Policy | null = null;
  if (outcome.kind === "attach" && outcome.needsPolicy) {
    policy = await promptPolicy();
    if (policy === null) {
      status("drop cancelled");
      repaint();
      return;
    }
  }
  try {
    const resp = await api.dropTile(
      workspaceId,
      outcome.request.tile,
      outcome.request.attachment,
      policy ?? undefined,
    );
    state = withWorkspace(state, resp.workspace);
    camera = fitCamera(resp.workspace, canvas.width, canvas.height);
    for (const note of resp.notices) status(note);
    if (resp.notices.length === 0) status("tile placed");
  } catch (err) {
    status(errText(err), true);
  }
  repaint();
}

function promptPolicy(): Promise<Policy | null> {
  // both sides carry rows: union or intersection, as the engine requires
  return new Promise((resolve) => {
    const dialog = document.getElementById("policy-dialog") as HTMLDialogElement;
    const pick = (p: Policy | null) => {
      dialog.close();
      resolve(p);
    };
    dialog.querySelectorAll("button").forEach((btn) => {
      (btn as HTMLButtonElement).onclick = () => pick((btn as HTMLButtonElement).dataset.policy as Policy | null ?? null);
    });
    dialog.showModal();
  });
}

async function inspect(simplex: string): Promise<void> {
  if (!state.doc) return;
  try {
    const view = await api.getTable(workspaceId, simplex);
    inspectorEl.replaceChildren(
      buildTableView(document, state.doc, view, today, (keys) => {
        state = selectRows(state, simplex, keys);
        status(
          keys.length
            ? `${keys.length} rows selected at ${simplex}; shift-drag to draw a query curve`
            : "selection cleared",
        );
      }),
    );
  } catch (err) {
    status(errText(err), true);
  }
}

dedupToggle?.addEventListener("change", () => {
  state = { ...state, dedup: dedupToggle.checked };
});

function errText(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}

async function boot(): Promise<void> {
  await loadLibrary();
  await refresh();
  status(`workspace "${workspaceId}" ready`);
}

boot().catch((err) => status(errText(err), true));
