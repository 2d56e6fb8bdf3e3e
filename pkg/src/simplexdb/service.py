"""HTTP service exposing tiles, workspaces, drops and queries as JSON.

One workspace per id, created on first touch; mutations serialize through a
per-workspace lock while reads return the current immutable snapshot.
Errors come back as {"code", "message", "detail"} objects with a matching
HTTP status.  A static directory can be mounted at / for the browser
workbench.
"""

from __future__ import annotations

import json
import posixpath
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, Optional, Tuple
from urllib.parse import parse_qs, urlparse

from . import documents
from .errors import SimplexDBError
from .tables import Table, VirtualTable
from .tiles import TileLibrary, builtin_library, export_tile, import_tile, list_tiles
from .workspace import (
    Workspace,
    drop_tile,
    empty_workspace,
    run_query,
    save_workspace,
)
from .zigzag import graph_table

JSON_TYPE = "application/json; charset=utf-8"


@dataclass
class ServiceState:
    library: TileLibrary = field(default_factory=builtin_library)
    seed: int = 0
    workspaces: Dict[str, Workspace] = field(default_factory=dict)
    locks: Dict[str, threading.Lock] = field(
        default_factory=lambda: defaultdict(threading.Lock)
    )

    def workspace(self, wid: str) -> Workspace:
        # setdefault is atomic under the GIL; mutations serialize via locks[wid]
        return self.workspaces.setdefault(wid, empty_workspace(self.seed))


class _HttpError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.payload = {"code": code, "message": message, "detail": detail}


def _graph_doc(result, dedup: bool) -> dict:
    g = graph_table(result, dedup=dedup)
    return {
        "keys": list(g.keys),
        "rows": [list(g.rows[k]) for k in g.keys],
        "back_map": dict(sorted(result.back_map.items())) if not dedup else {},
    }


def _table_view(workspace: Workspace, simplex_id: str) -> dict:
    if simplex_id not in workspace.schema.simplices:
        raise _HttpError(404, "unknown-simplex", f"no simplex {simplex_id!r}")
    t = workspace.sheaf.table(simplex_id)
    prov = workspace.provenance.get(simplex_id)
    if isinstance(t, VirtualTable):
        return {
            "simplex": simplex_id,
            "virtual": True,
            "description": t.description(),
            "samples": [list(r) for r in t.sample_rows()],
            "provenance": prov,
        }
    assert isinstance(t, Table)
    return {
        "simplex": simplex_id,
        "virtual": False,
        "keys": list(t.keys),
        "rows": [list(t.rows[k]) for k in t.keys],
        "provenance": prov,
    }


class Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def state(self) -> ServiceState:
        return self.server.state  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    # -- plumbing ----------------------------------------------------------

    def _send(self, status: int, payload: object, content_type: str = JSON_TYPE) -> None:
        body = (
            documents.canonical_json(payload).encode("utf-8")
            if not isinstance(payload, bytes)
            else payload
        )
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise _HttpError(400, "bad-json", "request body is not valid JSON", str(err))
        if not isinstance(doc, dict):
            raise _HttpError(400, "bad-json", "request body must be a JSON object")
        return doc

    def do_OPTIONS(self) -> None:  # CORS preflight
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        self._route("GET")

    def do_POST(self) -> None:
        self._route("POST")

    def _route(self, method: str) -> None:
        try:
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            query = parse_qs(url.query)
            self._dispatch(method, parts, query)
        except _HttpError as err:
            self._send(err.status, err.payload)
        except SimplexDBError as err:
            self._send(
                400,
                {"code": type(err).__name__, "message": str(err), "detail": ""},
            )
        except Exception as err:  # pragma: no cover - defensive
            self._send(500, {"code": "internal", "message": str(err), "detail": ""})

    # -- routes ------------------------------------------------------------

    def _dispatch(self, method: str, parts, query) -> None:
        if method == "GET" and parts == ["tiles"]:
            flags = {}
            if "verified" in query:
                flags["verified"] = query["verified"][0].lower() == "true"
            if "source" in query:
                flags["source"] = query["source"][0]
            summaries = list_tiles(self.state.library, **flags)
            for entry in summaries:
                tile = self.state.library.get(entry["name"])
                entry["document"] = json.loads(export_tile(tile))
            self._send(200, {"tiles": summaries})
            return
        if method == "POST" and parts == ["tiles"]:
            raw = documents.canonical_json(self._body())
            tile = import_tile(raw)
            self.state.library.add(tile)
            self._send(201, {"name": tile.name})
            return
        if parts and parts[0] == "workspaces" and len(parts) >= 2:
            wid = parts[1]
            rest = parts[2:]
            if method == "GET" and not rest:
                self._send(200, json.loads(save_workspace(self.state.workspace(wid))))
                return
            if method == "GET" and rest == ["layout"]:
                ws = self.state.workspace(wid)
                self._send(
                    200,
                    {
                        "seed": ws.seed,
                        "points": {v: [p[0], p[1]] for v, p in sorted(ws.layout.points.items())},
                    },
                )
                return
            if method == "GET" and len(rest) == 2 and rest[0] == "table":
                self._send(200, _table_view(self.state.workspace(wid), rest[1]))
                return
            if method == "POST" and rest == ["drop"]:
                self._drop(wid)
                return
            if method == "POST" and rest == ["query"]:
                self._query(wid)
                return
        if method == "GET" and getattr(self.server, "static_dir", None):
            self._static(parts)
            return
        raise _HttpError(404, "not-found", f"no route for {method} {self.path}")

    def _drop(self, wid: str) -> None:
        body = self._body()
        tile_ref = body.get("tile")
        if isinstance(tile_ref, str):
            tile = self.state.library.get(tile_ref)
        elif isinstance(tile_ref, dict):
            tile = import_tile(documents.canonical_json(tile_ref))
        else:
            raise _HttpError(400, "bad-tile", "drop needs a tile name or document")
        att_doc = body.get("attachment")
        attachment: Optional[Tuple[str, str, tuple]] = None
        if att_doc is not None:
            try:
                attachment = (
                    att_doc["workspace_simplex"],
                    att_doc["tile_simplex"],
                    tuple(att_doc["matching"]),
                )
            except (KeyError, TypeError) as err:
                raise _HttpError(400, "bad-attachment", "malformed attachment", str(err))
        with self.state.locks[wid]:
            ws = self.state.workspace(wid)
            ws = drop_tile(ws, tile, attachment, body.get("policy"))
            self.state.workspaces[wid] = ws
        self._send(
            200,
            {"workspace": json.loads(save_workspace(ws)), "notices": list(ws.notices)},
        )

    def _query(self, wid: str) -> None:
        body = self._body()
        ws = self.state.workspace(wid)
        if "zigzag" in body:
            zigzag = documents.zigzag_from_doc(body["zigzag"])
        elif "polyline" in body:
            from .curves import curve_to_zigzag

            polyline = [tuple(p) for p in body["polyline"]]
            zigzag = curve_to_zigzag(ws.schema, ws.layout, polyline)
        else:
            raise _HttpError(400, "bad-query", "query needs a zigzag or a polyline")
        selection = documents.selection_from_doc(body.get("selection"))
        result = run_query(ws, zigzag, selection)
        dedup = bool(body.get("dedup", False))
        self._send(
            200,
            {
                "start": result.start,
                "end": result.end,
                "zigzag": documents.zigzag_to_doc(zigzag),
                "end_table": {
                    "keys": list(result.end_table.keys),
                    "rows": [list(result.end_table.rows[k]) for k in result.end_table.keys],
                },
                "graph": _graph_doc(result, dedup),
            },
        )

    def _static(self, parts) -> None:
        import os

        base = self.server.static_dir  # type: ignore[attr-defined]
        rel = posixpath.normpath("/".join(parts)) if parts else "index.html"
        if rel in (".", ""):
            rel = "index.html"
        path = os.path.join(base, rel)
        if not os.path.abspath(path).startswith(os.path.abspath(base)) or not os.path.isfile(path):
            raise _HttpError(404, "not-found", f"no static file {rel!r}")
        ctype = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": JSON_TYPE,
        }.get(posixpath.splitext(rel)[1], "application/octet-stream")
        with open(path, "rb") as fh:
            self._send(200, fh.read(), ctype)


def make_server(
    host: str = "127.0.0.1",
    port: int = 0,
    state: Optional[ServiceState] = None,
    static_dir: Optional[str] = None,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), Handler)
    server.state = state or ServiceState()  # type: ignore[attr-defined]
    server.static_dir = static_dir  # type: ignore[attr-defined]
    server.verbose = verbose  # type: ignore[attr-defined]
    return server


def serve_forever(
    host: str, port: int, state: Optional[ServiceState] = None, static_dir: Optional[str] = None
) -> None:  # pragma: no cover - interactive entry point
    server = make_server(host, port, state, static_dir, verbose=True)
    print(f"simplexdb service on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
