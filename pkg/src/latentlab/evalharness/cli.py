"""`eval-ab` command line: prompt generation, task building, reports, server."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from .prompts import (
    DEFAULT_CONCEPT_HISTOGRAM,
    generate_prompt_set,
    load_prompts,
    validate_prompt_distribution,
    write_prompts,
)
from .report import compute_report, render_report
from .store import EvalState, load_tasks
from .tasks import METRICS, build_task_set

_STATE_PROMPTS = "prompts.jsonl"
_STATE_TASKS = "tasks.jsonl"
_STATE_JUDGMENTS = "judgments.jsonl"


def _load_image_map(path: str | Path) -> dict[str, str]:
    """JSONL of {prompt_id, uri} -> mapping, uris resolved next to the file."""
    path = Path(path)
    base = path.parent
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            mapping[row["prompt_id"]] = str((base / row["uri"]).resolve())
    return mapping


def open_state(state_dir: str | Path) -> EvalState:
    state_dir = Path(state_dir)
    prompts = load_prompts(state_dir / _STATE_PROMPTS)
    tasks = load_tasks(state_dir / _STATE_TASKS)
    log = state_dir / _STATE_JUDGMENTS
    state = EvalState.replay(tasks, prompts, log if log.exists() else None)
    state.attach_log(log)
    return state


def _cmd_gen_prompts(args) -> int:
    prompts = generate_prompt_set(args.n, args.seed, source=args.source)
    ok, l1 = validate_prompt_distribution(prompts, DEFAULT_CONCEPT_HISTOGRAM)
    write_prompts(prompts, args.out)
    print(f"wrote {len(prompts)} prompts (histogram L1={l1:.4f}, ok={ok})")
    return 0


def _cmd_build_tasks(args) -> int:
    prompts = load_prompts(args.prompts)
    images_x = _load_image_map(args.images_x)
    images_y = _load_image_map(args.images_y)

    metrics = METRICS if args.metric == "both" else (args.metric,)
    tasks = []
    for metric in metrics:
        tasks.extend(build_task_set(prompts, images_x, images_y, metric, args.seed))

    state_dir = Path(args.state)
    state_dir.mkdir(parents=True, exist_ok=True)
    write_prompts(prompts, state_dir / _STATE_PROMPTS)
    state = EvalState(tasks, prompts)
    state.save_tasks(state_dir / _STATE_TASKS)
    print(f"built {len(tasks)} tasks in {state_dir}")
    return 0


def _cmd_report(args) -> int:
    state = open_state(args.state)
    state.close()
    report = compute_report(state.tagged_outcomes())
    if args.slice == "stylized":
        report = {
            "rows": {
                k: v for k, v in report["rows"].items() if k.endswith("/stylized")
            },
            "n_outcomes": report["n_outcomes"],
        }
    text = render_report(report)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import serve_eval_api

    state = open_state(args.state)
    app = serve_eval_api(state)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main_eval_ab(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="eval-ab", description="Paired preference evaluation tools."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen-prompts", help="generate a stand-in prompt set")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--source", choices=("parti-like", "open-user-input-like"),
        default="open-user-input-like",
    )
    p_gen.add_argument("--out", required=True, help="prompts JSONL path")
    p_gen.set_defaults(func=_cmd_gen_prompts)

    p_build = sub.add_parser("build-tasks", help="pair model outputs into tasks")
    p_build.add_argument("--prompts", required=True, help="prompts JSONL")
    p_build.add_argument("--images-x", required=True, help="model X image map JSONL")
    p_build.add_argument("--images-y", required=True, help="model Y image map JSONL")
    p_build.add_argument(
        "--metric", choices=METRICS + ("both",), default="both"
    )
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--state", required=True, help="state directory to create")
    p_build.set_defaults(func=_cmd_build_tasks)

    p_report = sub.add_parser("report", help="aggregate judgments into a report")
    p_report.add_argument("--state", required=True, help="state directory")
    p_report.add_argument("--slice", choices=("all", "stylized"), default="all")
    p_report.add_argument("--out", help="write JSON here instead of stdout")
    p_report.set_defaults(func=_cmd_report)

    p_serve = sub.add_parser("serve", help="serve the rating HTTP API")
    p_serve.add_argument("--state", required=True, help="state directory")
    p_serve.add_argument("--port", type=int, default=8001)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)
