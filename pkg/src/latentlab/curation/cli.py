"""`curate` command line: auto cascade, annotation server, quality export."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from .records import CascadeConfig, CurationStage, ImageRecord
from .store import CurationStore, ExportBlockedError

_STATE_CONFIG = "config.yaml"
_STATE_EVENTS = "events.jsonl"


def _load_records(path: str | Path) -> list[ImageRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(ImageRecord.from_dict(json.loads(line)))
    return records


def open_state(state_dir: str | Path) -> CurationStore:
    """Load a store from a state directory (config.yaml + events.jsonl)."""
    state_dir = Path(state_dir)
    config = CascadeConfig.from_dict(
        yaml.safe_load((state_dir / _STATE_CONFIG).read_text()) or {}
    )
    events_path = state_dir / _STATE_EVENTS
    if events_path.exists():
        store = CurationStore.replay(events_path, config)
    else:
        store = CurationStore(config)
    store.attach_log(events_path)
    return store


def init_state(state_dir: str | Path, config: CascadeConfig) -> CurationStore:
    state_dir = Path(state_dir)
    state_dir.mkdir(parents=True, exist_ok=True)
    (state_dir / _STATE_CONFIG).write_text(yaml.safe_dump(config.to_dict()))
    store = CurationStore(config)
    store.attach_log(state_dir / _STATE_EVENTS)
    return store


def _cmd_auto(args) -> int:
    config = CascadeConfig.from_dict(yaml.safe_load(Path(args.config).read_text()) or {})
    records = _load_records(args.infile)

    if args.state:
        store = init_state(args.state, config)
    else:
        store = CurationStore(config)
    store.ingest(records)
    stats = store.run_auto_cascade()

    with open(args.out, "w", encoding="utf-8") as fh:
        for record in store.by_stage(CurationStage.AUTO_PASSED):
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
    store.close()

    print(json.dumps(stats, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    store = open_state(args.state)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_export(args) -> int:
    store = open_state(args.state)
    try:
        path = store.export_quality_set(args.out)
    except ExportBlockedError as exc:
        print(f"export blocked: {exc}", file=sys.stderr)
        return 1
    finally:
        store.close()
    print(f"wrote {path}")
    return 0


def main_curate(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="curate", description="Data curation funnel tools."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_auto = sub.add_parser("auto", help="run the automatic filter cascade")
    p_auto.add_argument("--in", dest="infile", required=True, help="records JSONL")
    p_auto.add_argument("--config", required=True, help="cascade config YAML")
    p_auto.add_argument("--out", required=True, help="survivors JSONL")
    p_auto.add_argument("--state", help="optional state dir to initialize")
    p_auto.set_defaults(func=_cmd_auto)

    p_serve = sub.add_parser("serve", help="serve the annotation HTTP API")
    p_serve.add_argument("--state", required=True, help="state directory")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)

    p_export = sub.add_parser("export", help="export the SELECTED manifest")
    p_export.add_argument("--state", required=True, help="state directory")
    p_export.add_argument("--out", required=True, help="manifest JSONL path")
    p_export.set_defaults(func=_cmd_export)

    args = parser.parse_args(argv)
    return args.func(args)
