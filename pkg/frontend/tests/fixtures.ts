/** Hand-built documents for unit tests: a labeled triangle, a loop, and the
 * rhombus tiles used by the end-to-end loop. */

import type { SimplexDoc, TileDoc, WorkspaceDoc, ProvenanceDoc } from "../src/types.js";

export function provenance(overrides: Partial<ProvenanceDoc> = {}): ProvenanceDoc {
  return {
    source: "test fixture",
    created_at: "2026-01-01",
    verified: false,
    freshness: "2026-01-01",
    trademark: null,
    ...overrides,
  };
}

function representableTriangle(prefix: string, labels: [string, string, string]): SimplexDoc[] {
  return [
    { id: `${prefix}0`, dim: 0, faces: [], label: labels[0] },
    { id: `${prefix}1`, dim: 0, faces: [], label: labels[1] },
    { id: `${prefix}2`, dim: 0, faces: [], label: labels[2] },
    { id: `${prefix}0_1`, dim: 1, faces: [`${prefix}1`, `${prefix}0`], label: null },
    { id: `${prefix}0_2`, dim: 1, faces: [`${prefix}2`, `${prefix}0`], label: null },
    { id: `${prefix}1_2`, dim: 1, faces: [`${prefix}2`, `${prefix}1`], label: null },
    {
      id: `${prefix}0_1_2`,
      dim: 2,
      faces: [`${prefix}1_2`, `${prefix}0_2`, `${prefix}0_1`],
      label: null,
    },
  ];
}

export function triangleWorkspace(): WorkspaceDoc {
  return {
    version: 1,
    datatypes: [
      { name: "First", kind: "text" },
      { name: "Last", kind: "text" },
      { name: "SSN", kind: "text" },
    ],
    simplices: representableTriangle("s", ["First", "Last", "SSN"]),
    tables: [],
    keymaps: [],
    layout: { seed: 0, points: { s0: [0, 0], s1: [1, 0], s2: [0, 1] } },
    provenance: {},
    log: [],
  };
}

export function loopWorkspace(): WorkspaceDoc {
  return {
    version: 1,
    datatypes: [{ name: "person", kind: "text" }],
    simplices: [
      { id: "p", dim: 0, faces: [], label: "person" },
      { id: "e", dim: 1, faces: ["p", "p"], label: null },
    ],
    tables: [],
    keymaps: [],
    layout: { seed: 0, points: { p: [0, 0] } },
    provenance: {},
    log: [],
  };
}

export function interactionsTile(): TileDoc {
  return {
    version: 1,
    name: "interactions",
    datatypes: [
      { name: "company", kind: "text" },
      { name: "when", kind: "date" },
    ],
    simplices: representableTriangle("i", ["company", "company", "when"]),
    tables: [
      {
        simplex: "i0_1_2",
        keys: ["r0", "r1"],
        rows: [
          ["X", "Y", "2024-01-01"],
          ["Y", "Z", "2024-01-02"],
        ],
      },
    ],
    provenance: provenance({ source: "crm", verified: true }),
  };
}

export function creationsTile(): TileDoc {
  return {
    version: 1,
    name: "creations",
    datatypes: [
      { name: "company", kind: "text" },
      { name: "creation", kind: "text" },
    ],
    simplices: representableTriangle("c", ["company", "company", "creation"]),
    tables: [
      {
        simplex: "c0_1_2",
        keys: ["r0"],
        rows: [["X", "Y", "widget"]],
      },
    ],
    provenance: provenance({ source: "patents" }),
  };
}

export function todayTile(value: string): TileDoc {
  return {
    version: 1,
    name: "today",
    datatypes: [{ name: "when", kind: "date" }],
    simplices: [{ id: "t0", dim: 0, faces: [], label: "when" }],
    tables: [{ simplex: "t0", keys: ["r0"], rows: [[value]] }],
    provenance: provenance({ source: "built-in: today's date", verified: true }),
  };
}
