from __future__ import annotations

import json
import threading
from http.client import HTTPConnection

import pytest

from simplexdb.service import ServiceState, make_server
from simplexdb.tiles import builtin_library, export_tile

from .test_tiles import events_tile


@pytest.fixture(scope="module")
def server():
    state = ServiceState(library=builtin_library(today="2026-08-08"))
    srv = make_server(port=0, state=state)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()


def call(server, method: str, path: str, body: dict | None = None):
    conn = HTTPConnection("127.0.0.1", server.server_address[1], timeout=10)
    payload = json.dumps(body) if body is not None else None
    headers = {"Content-Type": "application/json"} if payload else {}
    conn.request(method, path, body=payload, headers=headers)
    resp = conn.getresponse()
    data = json.loads(resp.read().decode("utf-8"))
    conn.close()
    return resp.status, data


def test_list_tiles(server):
    status, doc = call(server, "GET", "/tiles")
    assert status == 200
    names = [t["name"] for t in doc["tiles"]]
    assert "addition" in names and "today" in names


def test_list_tiles_verified_filter(server):
    status, doc = call(server, "GET", "/tiles?verified=true")
    assert status == 200
    assert all(t["verified"] for t in doc["tiles"])


def test_import_tile_endpoint(server):
    tile_doc = json.loads(export_tile(events_tile("posted-events")))
    status, doc = call(server, "POST", "/tiles", tile_doc)
    assert status == 201 and doc["name"] == "posted-events"
    status, doc = call(server, "GET", "/tiles")
    assert "posted-events" in [t["name"] for t in doc["tiles"]]


def test_workspace_auto_created(server):
    status, doc = call(server, "GET", "/workspaces/fresh")
    assert status == 200
    assert doc["simplices"] == [] and doc["log"] == []


def test_drop_and_query_roundtrip(server):
    tile_doc = json.loads(export_tile(events_tile()))
    status, doc = call(server, "POST", "/workspaces/w1/drop", {"tile": tile_doc})
    assert status == 200
    assert [s["id"] for s in doc["workspace"]["simplices"]] == ["ev0", "ev1", "ev0_1"]

    status, doc = call(
        server,
        "POST",
        "/workspaces/w1/drop",
        {
            "tile": "today",
            "attachment": {
                "workspace_simplex": "ev1",
                "tile_simplex": "today0",
                "matching": [0],
            },
            "policy": "intersect",
        },
    )
    assert status == 200

    status, doc = call(
        server,
        "POST",
        "/workspaces/w1/query",
        {
            "zigzag": {
                "start": "ev1",
                "steps": [
                    {"simplex": "ev0_1", "direction": "ascend", "face_index": 0},
                    {"simplex": "ev0", "direction": "descend", "face_index": 1},
                ],
            },
            "selection": {"simplex": "ev1", "keys": ["k0&r0"]},
        },
    )
    assert status == 200
    assert sorted(r[1] for r in doc["graph"]["rows"]) == ["gala", "launch"]


def test_table_view_concrete_and_virtual(server):
    status, _ = call(
        server, "POST", "/workspaces/w2/drop", {"tile": json.loads(export_tile(events_tile()))}
    )
    assert status == 200
    status, doc = call(server, "GET", "/workspaces/w2/table/ev0_1")
    assert status == 200 and not doc["virtual"]
    assert len(doc["rows"]) == 3
    assert doc["provenance"]["source"] == "calendar export"

    status, _ = call(
        server,
        "POST",
        "/workspaces/w2/drop",
        {
            "tile": "addition",
            "attachment": None,
        },
    )
    assert status == 200
    status, doc = call(server, "GET", "/workspaces/w2/table/add0_1_2")
    assert status == 200 and doc["virtual"]
    assert doc["description"] == "c = a + b"
    assert len(doc["samples"]) == 3


def test_layout_endpoint(server):
    status, doc = call(server, "GET", "/workspaces/w2/layout")
    assert status == 200
    assert set(doc["points"]) == {"ev0", "ev1", "add0", "add1", "add2"}


def test_error_shape_unknown_route(server):
    status, doc = call(server, "GET", "/nope")
    assert status == 404
    assert set(doc) == {"code", "message", "detail"}


def test_error_shape_bad_drop(server):
    status, doc = call(server, "POST", "/workspaces/w3/drop", {"tile": 42})
    assert status == 400
    assert doc["code"] == "bad-tile"


def test_error_shape_engine_error(server):
    tile_doc = json.loads(export_tile(events_tile()))
    call(server, "POST", "/workspaces/w4/drop", {"tile": tile_doc})
    status, doc = call(
        server,
        "POST",
        "/workspaces/w4/drop",
        {
            "tile": tile_doc,
            "attachment": {
                "workspace_simplex": "ev0_1",
                "tile_simplex": "ev0_1",
                "matching": [0, 1],
            },
        },
    )
    assert status == 400
    assert doc["code"] == "TileError"
    assert "policy" in doc["message"]


def test_concurrent_reads_during_drops(server):
    tile_doc = json.loads(export_tile(events_tile()))
    errors = []

    def reader():
        for _ in range(20):
            status, _ = call(server, "GET", "/workspaces/w5")
            if status != 200:
                errors.append(status)

    def writer():
        for i in range(5):
            status, _ = call(server, "POST", "/workspaces/w5/drop", {"tile": tile_doc, "policy": "union_all", "attachment": None if i == 0 else {"workspace_simplex": "ev0_1", "tile_simplex": "ev0_1", "matching": [0, 1]}})
            if status != 200:
                errors.append(status)

    threads = [threading.Thread(target=reader) for _ in range(3)] + [
        threading.Thread(target=writer)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
