/** Typed fetch client for the service; every schema change goes through it. */

import type {
  AttachmentDoc,
  ErrorDoc,
  Policy,
  QueryResponse,
  SelectionDoc,
  TableViewDoc,
  TileDoc,
  TileSummary,
  WorkspaceDoc,
  ZigzagDoc,
  Point,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: string = "",
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = (await resp.json()) as T | ErrorDoc;
  if (!resp.ok) {
    const err = body as ErrorDoc;
    throw new ApiError(resp.status, err.code ?? "error", err.message ?? "request failed", err.detail ?? "");
  }
  return body as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class ApiClient {
  constructor(public baseUrl: string = "") {}

  listTiles(filter?: { verified?: boolean; source?: string }): Promise<{ tiles: TileSummary[] }> {
    const params = new URLSearchParams();
    if (filter?.verified !== undefined) params.set("verified", String(filter.verified));
    if (filter?.source !== undefined) params.set("source", filter.source);
    const qs = params.toString();
    return request(`${this.baseUrl}/tiles${qs ? "?" + qs : ""}`);
  }

  importTile(doc: TileDoc): Promise<{ name: string }> {
    return request(`${this.baseUrl}/tiles`, post(doc));
  }

  getWorkspace(id: string): Promise<WorkspaceDoc> {
    return request(`${this.baseUrl}/workspaces/${id}`);
  }

  getLayout(id: string): Promise<{ seed: number; points: Record<string, [number, number]> }> {
    return request(`${this.baseUrl}/workspaces/${id}/layout`);
  }

  getTable(id: string, simplex: string): Promise<TableViewDoc> {
    return request(`${this.baseUrl}/workspaces/${id}/table/${simplex}`);
  }

  dropTile(
    id: string,
    tile: string | TileDoc,
    attachment: AttachmentDoc | null,
    policy?: Policy,
  ): Promise<{ workspace: WorkspaceDoc; notices: string[] }> {
    return request(
      `${this.baseUrl}/workspaces/${id}/drop`,
      post({ tile, attachment, policy: policy ?? null }),
    );
  }

  queryPolyline(id: string, polyline: Point[], selection: SelectionDoc, dedup = false): Promise<QueryResponse> {
    return request(`${this.baseUrl}/workspaces/${id}/query`, post({ polyline, selection, dedup }));
  }

  queryZigzag(id: string, zigzag: ZigzagDoc, selection: SelectionDoc, dedup = false): Promise<QueryResponse> {
    return request(`${this.baseUrl}/workspaces/${id}/query`, post({ zigzag, selection, dedup }));
  }
}
