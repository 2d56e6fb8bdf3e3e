import assert from "node:assert/strict";
import { test } from "node:test";

import {
  beginDrag,
  dragOver,
  extendCurve,
  finishCurve,
  initialState,
  releaseDrop,
  selectRows,
  startCurve,
  withWorkspace,
} from "../src/state.js";
import { creationsTile, interactionsTile, todayTile, triangleWorkspace } from "./fixtures.js";
import type { WorkspaceDoc } from "../src/types.js";

function interactionsWorkspace(): WorkspaceDoc {
  const tile = interactionsTile();
  return {
    version: 1,
    datatypes: tile.datatypes,
    simplices: tile.simplices,
    tables: tile.tables,
    keymaps: [],
    layout: { seed: 0, points: { i0: [0, 0], i1: [1, 0], i2: [0.5, 0.9] } },
    provenance: {},
    log: [],
  };
}

test("dragging highlights exactly the label-compatible simplices", () => {
  const state = withWorkspace(initialState("w"), interactionsWorkspace());
  const dragging = beginDrag(state, creationsTile());
  // the creations triangle itself is incompatible (when vs creation), but
  // its company-company edge fits the interactions company-company edge
  assert.deepEqual(Object.keys(dragging.pendingDrop!.targets).sort(), [
    "i0",
    "i0_1",
    "i1",
  ]);
  assert.equal(dragging.pendingDrop!.targets["i0_1"].tileSimplex, "c0_1");
});

test("hover over an incompatible simplex is a visual rejection", () => {
  const state = withWorkspace(initialState("w"), interactionsWorkspace());
  let dragging = beginDrag(state, creationsTile());
  dragging = dragOver(dragging, [0.5, 0.9]); // the date vertex i2
  assert.equal(dragging.pendingDrop!.hover, null);
  const { outcome } = releaseDrop(dragging, false, false);
  assert.equal(outcome.kind, "rejected");
});

test("release over a compatible edge builds the attachment request", () => {
  const state = withWorkspace(initialState("w"), interactionsWorkspace());
  let dragging = beginDrag(state, creationsTile());
  dragging = dragOver(dragging, [0.5, 0.0]); // midpoint of the shared edge
  assert.equal(dragging.pendingDrop!.hover, "i0_1");
  const { state: after, outcome } = releaseDrop(dragging, false);
  assert.equal(after.pendingDrop, null);
  assert.equal(outcome.kind, "attach");
  if (outcome.kind === "attach") {
    assert.deepEqual(outcome.request.attachment, {
      workspace_simplex: "i0_1",
      tile_simplex: "c0_1",
      matching: [0, 1],
    });
    // tile side carries no table on that edge: no policy prompt
    assert.equal(outcome.needsPolicy, false);
  }
});

test("dropping a concrete tile on a concrete table prompts for a policy", () => {
  const ws = interactionsWorkspace();
  const state = withWorkspace(initialState("w"), ws);
  let dragging = beginDrag(state, interactionsTile());
  dragging = dragOver(dragging, [0.52, 0.31]); // triangle interior
  assert.equal(dragging.pendingDrop!.hover, "i0_1_2");
  const { outcome } = releaseDrop(dragging, true);
  assert.equal(outcome.kind, "attach");
  if (outcome.kind === "attach") assert.equal(outcome.needsPolicy, true);
});

test("release with no hover drops the tile detached", () => {
  const state = withWorkspace(initialState("w"), interactionsWorkspace());
  const dragging = beginDrag(state, todayTile("2026-08-08"));
  const { outcome } = releaseDrop(dragging, false);
  assert.equal(outcome.kind, "detached");
  if (outcome.kind === "detached") assert.equal(outcome.request.attachment, null);
});

test("curves forward raw pointer samples unmodified", () => {
  let state = withWorkspace(initialState("w"), interactionsWorkspace());
  state = selectRows(state, "i2", ["k0"]);
  state = startCurve(state, [0.5, 0.9]);
  state = extendCurve(state, [0.51, 0.7]);
  state = extendCurve(state, [0.52, 0.5]);
  const { state: done, request } = finishCurve(state);
  assert.equal(done.polyline, null);
  assert.deepEqual(request.polyline, [
    [0.5, 0.9],
    [0.51, 0.7],
    [0.52, 0.5],
  ]);
  assert.deepEqual(request.selection, { simplex: "i2", keys: ["k0"] });
});

test("drawing requires a selection first", () => {
  const state = withWorkspace(initialState("w"), interactionsWorkspace());
  assert.throws(() => startCurve(state, [0, 0]), /choose rows/);
});
