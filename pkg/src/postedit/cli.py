"""postedit command line: run the service, or drive a running one over HTTP."""

from __future__ import annotations

import argparse
import json
import sys

import httpx


def _add_server(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--server", default="http://127.0.0.1:8080", help="base URL of a running service"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="postedit",
        description="MT post-editing annotation service and client",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", metavar="PATH", help="JSON config file")
    serve.add_argument("--bind", metavar="ADDR", help="host:port to listen on")
    serve.add_argument("--store", choices=["memory", "file"], help="store backend")
    serve.add_argument("--store-path", metavar="PATH", help="file store location")

    ingest = sub.add_parser("ingest", help="bulk-upload source/MT pairs")
    _add_server(ingest)
    ingest.add_argument("--dataset", required=True)
    ingest.add_argument(
        "--input", required=True, metavar="PATH",
        help='JSON file: {"pairs": [...]} or a bare array of pairs',
    )

    pairs = sub.add_parser("pairs", help="list pairs and their status")
    _add_server(pairs)
    pairs.add_argument("--dataset", required=True)
    pairs.add_argument("--status", choices=["pending", "in_progress", "completed"])
    pairs.add_argument("--page", type=int, default=1)
    pairs.add_argument("--page-size", type=int, default=50)

    detect = sub.add_parser("detect", help="run error detection on one pair")
    _add_server(detect)
    detect.add_argument("--pair", required=True)
    detect.add_argument("--engine", default="stub")
    detect.add_argument("--force", action="store_true", help="bypass the cache")

    submit = sub.add_parser("submit", help="submit an annotation for one pair")
    _add_server(submit)
    submit.add_argument("--pair", required=True)
    submit.add_argument("--input", required=True, metavar="PATH", help="annotation JSON")
    submit.add_argument("--expected-version", type=int, default=0)
    submit.add_argument("--token", help="bearer token when the server requires auth")

    export = sub.add_parser("export", help="download the completed dataset")
    _add_server(export)
    export.add_argument("--dataset", required=True)
    export.add_argument("--format", choices=["json", "csv"], default="json")
    export.add_argument("--output", metavar="PATH", help="write here instead of stdout")

    audit = sub.add_parser("audit", help="scan a file store for integrity issues")
    audit.add_argument("--store-path", required=True, metavar="PATH")

    return parser


def _fail(response: httpx.Response) -> int:
    try:
        detail = response.json()
    except ValueError:
        detail = response.text
    print(f"error {response.status_code}: {json.dumps(detail)}", file=sys.stderr)
    return 1


def _print_json(payload) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, load_config

    config = load_config(
        args.config, bind=args.bind, store_backend=args.store, store_path=args.store_path
    )
    host, _, port = config.bind.rpartition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def cmd_ingest(args) -> int:
    with open(args.input, encoding="utf-8") as handle:
        doc = json.load(handle)
    pairs = doc["pairs"] if isinstance(doc, dict) else doc
    response = httpx.post(
        f"{args.server}/datasets/{args.dataset}/pairs", json={"pairs": pairs}
    )
    if not response.is_success:
        return _fail(response)
    _print_json(response.json())
    return 0


def cmd_pairs(args) -> int:
    params: dict = {"page": args.page, "page_size": args.page_size}
    if args.status:
        params["status"] = args.status
    response = httpx.get(f"{args.server}/datasets/{args.dataset}/pairs", params=params)
    if not response.is_success:
        return _fail(response)
    _print_json(response.json())
    return 0


def cmd_detect(args) -> int:
    params = {"engine": args.engine}
    if args.force:
        params["force"] = "true"
    response = httpx.post(f"{args.server}/pairs/{args.pair}/detect", params=params)
    if not response.is_success:
        return _fail(response)
    _print_json(response.json())
    return 0


def cmd_submit(args) -> int:
    with open(args.input, encoding="utf-8") as handle:
        annotation = json.load(handle)
    headers = {"If-Match": str(args.expected_version)}
    if args.token:
        headers["Authorization"] = f"Bearer {args.token}"
    response = httpx.put(
        f"{args.server}/pairs/{args.pair}/annotation", json=annotation, headers=headers
    )
    if not response.is_success:
        return _fail(response)
    _print_json(response.json())
    return 0


def cmd_export(args) -> int:
    response = httpx.get(
        f"{args.server}/datasets/{args.dataset}/export", params={"format": args.format}
    )
    if not response.is_success:
        return _fail(response)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(response.text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(response.text)
    return 0


def cmd_audit(args) -> int:
    from .store import FileStore

    store = FileStore(args.store_path)
    issues = store.audit()
    _print_json({"issues": issues})
    return 1 if issues else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "serve": cmd_serve,
        "ingest": cmd_ingest,
        "pairs": cmd_pairs,
        "detect": cmd_detect,
        "submit": cmd_submit,
        "export": cmd_export,
        "audit": cmd_audit,
    }
    try:
        return handlers[args.command](args)
    except httpx.TransportError as exc:
        print(f"cannot reach server: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
