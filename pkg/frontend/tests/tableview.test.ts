import assert from "node:assert/strict";
import { test } from "node:test";
import { JSDOM } from "jsdom";

import { buildResultView, buildTableView } from "../src/tableview.js";
import { provenance, triangleWorkspace } from "./fixtures.js";

function dom(): Document {
  return new JSDOM("<!doctype html><body></body>").window.document;
}

test("concrete table view renders rows with slot-label headers", () => {
  const d = dom();
  const ws = triangleWorkspace();
  const view = buildTableView(
    d,
    ws,
    {
      simplex: "s0_1_2",
      virtual: false,
      keys: ["r0", "r1"],
      rows: [
        ["Bob", "Smith", "1"],
        ["Ann", "Lee", "2"],
      ],
      provenance: null,
    },
    "2026-08-08",
  );
  const headers = Array.from(view.querySelectorAll("th")).map((th) => th.textContent);
  assert.deepEqual(headers, ["First", "Last", "SSN"]);
  assert.equal(view.querySelectorAll("tbody tr").length, 2);
});

test("verified tables get a check-mark badge", () => {
  const d = dom();
  const view = buildTableView(
    d,
    triangleWorkspace(),
    {
      simplex: "s0",
      virtual: false,
      keys: [],
      rows: [],
      provenance: provenance({ verified: true, source: "registry" }),
    },
    "2026-02-01",
  );
  const badge = view.querySelector(".badge.verified");
  assert.ok(badge);
  assert.equal(badge!.textContent, "✓");
  assert.equal(view.querySelectorAll("tbody tr").length, 0, "empty grid stays empty");
});

test("virtual tables show the rule and sample rows, not data", () => {
  const d = dom();
  const view = buildTableView(
    d,
    triangleWorkspace(),
    {
      simplex: "s0_1_2",
      virtual: true,
      description: "c = a + b",
      samples: [
        [0, 1, 1],
        [1, 2, 3],
        [2, 3, 5],
      ],
      provenance: null,
    },
    "2026-08-08",
  );
  assert.equal(view.querySelector(".virtual-rule")!.textContent, "c = a + b");
  assert.equal(view.querySelectorAll("tbody tr").length, 3);
  assert.match(view.querySelector(".virtual-note")!.textContent!, /computed/);
});

test("row selection reports the chosen keys", () => {
  const d = dom();
  const chosen: string[][] = [];
  const view = buildTableView(
    d,
    triangleWorkspace(),
    {
      simplex: "s0",
      virtual: false,
      keys: ["k0", "k1"],
      rows: [["a"], ["b"]],
      provenance: null,
    },
    "2026-08-08",
    (keys) => chosen.push(keys),
  );
  const boxes = view.querySelectorAll<HTMLInputElement>("input[type=checkbox]");
  assert.equal(boxes.length, 2);
  boxes[1].checked = true;
  boxes[1].dispatchEvent(new (d.defaultView as any).Event("change"));
  assert.deepEqual(chosen, [["k1"]]);
});

test("query results render one row per graph tuple with a dedup heading", () => {
  const d = dom();
  const view = buildResultView(
    d,
    [
      ["2024-01-01", "widget"],
      ["2024-01-01", "widget"],
    ],
    false,
  );
  assert.equal(view.querySelectorAll("tbody tr").length, 2);
  const distinct = buildResultView(d, [["2024-01-01", "widget"]], true);
  assert.match(distinct.querySelector("h3")!.textContent!, /distinct/);
});
