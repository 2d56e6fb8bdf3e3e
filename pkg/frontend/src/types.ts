/** Wire documents exchanged with the simplexdb service. */

export interface DataTypeDoc {
  name: string;
  kind: "enumerated" | "integer" | "text" | "date";
  values?: string[];
}

export interface SimplexDoc {
  id: string;
  dim: number;
  faces: string[];
  label: string | null;
}

export type Value = number | string;

export interface ConcreteTableDoc {
  simplex: string;
  keys: string[];
  rows: Value[][];
}

export interface VirtualTableDoc {
  simplex: string;
  virtual: { builtin: string; params: Record<string, unknown> };
}

export type TableDoc = ConcreteTableDoc | VirtualTableDoc;

export interface ProvenanceDoc {
  source: string;
  created_at: string;
  verified: boolean;
  freshness: string | null;
  trademark: string | null;
}

export interface WorkspaceDoc {
  version: number;
  datatypes: DataTypeDoc[];
  simplices: SimplexDoc[];
  tables: TableDoc[];
  keymaps: unknown[];
  layout: { seed: number; points: Record<string, [number, number]> };
  provenance: Record<string, ProvenanceDoc>;
  log: unknown[];
}

export interface TileDoc {
  version: number;
  name: string;
  datatypes: DataTypeDoc[];
  simplices: SimplexDoc[];
  tables: TableDoc[];
  provenance: ProvenanceDoc;
}

export interface TileSummary {
  name: string;
  dim: number;
  virtual: boolean;
  source: string;
  created_at: string;
  verified: boolean;
  freshness: string | null;
  trademark: string | null;
  document: TileDoc;
}

export interface AttachmentDoc {
  workspace_simplex: string;
  tile_simplex: string;
  matching: number[];
}

export type Policy = "intersect" | "union_all" | "union_dedup";

export interface ZigzagStepDoc {
  simplex: string;
  direction: "ascend" | "descend";
  face_index: number | number[];
}

export interface ZigzagDoc {
  start: string;
  steps: ZigzagStepDoc[];
}

export interface SelectionDoc {
  simplex: string;
  keys?: string[];
  rows?: Value[][];
  row_keys?: string[];
  key_map?: Record<string, string>;
}

export interface QueryResponse {
  start: string;
  end: string;
  zigzag: ZigzagDoc;
  end_table: { keys: string[]; rows: Value[][] };
  graph: { keys: string[]; rows: Value[][]; back_map: Record<string, string> };
}

export interface TableViewDoc {
  simplex: string;
  virtual: boolean;
  keys?: string[];
  rows?: Value[][];
  description?: string;
  samples?: Value[][];
  provenance: ProvenanceDoc | null;
}

export interface ErrorDoc {
  code: string;
  message: string;
  detail: string;
}

export type Point = [number, number];
