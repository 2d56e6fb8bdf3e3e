"""Command-line interface: validate documents, glue schemas, run queries,
import tiles, and serve the HTTP API."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import documents
from .errors import SimplexDBError
from .schema import glue, validate_schema
from .sheaf import validate_sheaf
from .tiles import import_tile
from .workspace import load_workspace, run_query
from .zigzag import graph_table


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_validate(args: argparse.Namespace) -> int:
    doc = documents.parse_document(_read(args.file))
    problems = []
    if "name" in doc:  # tile document
        import_tile(_read(args.file))
    else:
        registry = documents.datatypes_from_doc(doc.get("datatypes", []))
        try:
            schema = documents.simplices_from_doc(doc.get("simplices", []), registry)
        except SimplexDBError as err:
            print(f"invalid: {err}")
            return 1
        problems.extend(validate_schema(schema))
        if "tables" in doc:
            sheaf = documents.sheaf_from_doc_parts(
                schema, doc.get("tables"), doc.get("keymaps")
            )
            problems.extend(validate_sheaf(sheaf))
    for v in problems:
        print(f"{v.kind} at {v.simplex}: {v.detail}")
    if problems:
        return 1
    print("ok")
    return 0


def cmd_glue(args: argparse.Namespace) -> int:
    left = documents.schema_from_doc(documents.parse_document(_read(args.left)))
    right = documents.schema_from_doc(documents.parse_document(_read(args.right)))
    matching = (
        tuple(int(k) for k in args.matching.split(",")) if args.matching else None
    )
    result, emb_l, emb_r = glue(left, args.left_simplex, right, args.right_simplex, matching)
    out = documents.canonical_json(
        {
            **documents.schema_to_doc(result),
            "embeddings": {
                "left": dict(sorted(emb_l.simplex_map.items())),
                "right": dict(sorted(emb_r.simplex_map.items())),
            },
        }
    )
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    workspace = load_workspace(_read(args.workspace))
    if args.zigzag:
        query = documents.zigzag_from_doc(json.loads(_read(args.zigzag)))
    else:
        query = [tuple(p) for p in json.loads(_read(args.polyline))]
    selection = documents.selection_from_doc(json.loads(_read(args.select)))
    result = run_query(workspace, query, selection)
    g = graph_table(result, dedup=args.dedup)
    sys.stdout.write(
        documents.canonical_json(
            {
                "start": result.start,
                "end": result.end,
                "graph": [list(g.rows[k]) for k in g.keys],
            }
        )
    )
    return 0


def cmd_import_tile(args: argparse.Namespace) -> int:
    tile = import_tile(_read(args.file))
    if args.library:
        out = Path(args.library) / f"{tile.name}.tile.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        from .tiles import export_tile

        out.write_text(export_tile(tile), encoding="utf-8")
        print(f"imported {tile.name!r} -> {out}")
    else:
        print(f"tile {tile.name!r} ok: dim {tile.schema.simplex(tile.top).dim}, "
              f"source {tile.provenance.source!r}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:  # pragma: no cover - interactive
    from .service import ServiceState, serve_forever

    state = ServiceState(seed=args.seed)
    if args.library:
        for path in sorted(Path(args.library).glob("*.tile.json")):
            state.library.add(import_tile(path.read_text(encoding="utf-8")))
    serve_forever(args.host, args.port, state, args.static)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplexdb", description="tile-based simplicial database engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a schema/workspace/tile document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("glue", help="glue two schema documents along matched simplices")
    p.add_argument("left")
    p.add_argument("left_simplex")
    p.add_argument("right")
    p.add_argument("right_simplex")
    p.add_argument("--matching", help="comma-separated slot bijection, e.g. 1,0")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("query", help="run a zigzag or polyline query on a workspace")
    p.add_argument("workspace")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--zigzag")
    group.add_argument("--polyline")
    p.add_argument("--select", required=True)
    p.add_argument("--dedup", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("import-tile", help="validate a tile document, optionally into a library directory")
    p.add_argument("file")
    p.add_argument("--library")
    p.set_defaults(func=cmd_import_tile)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--library", help="directory of *.tile.json files to preload")
    p.add_argument("--static", help="directory served at / (the browser workbench)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SimplexDBError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
