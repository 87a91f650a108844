import json

from latentlab.evalharness import PreferenceJudgment
from latentlab.evalharness.cli import main_eval_ab, open_state


def write_image_maps(tmp_path, prompts_path):
    prompt_ids = [json.loads(line)["id"]
                  for line in prompts_path.read_text().splitlines()]
    maps = {}
    for model in ("x", "y"):
        rows = []
        for pid in prompt_ids:
            image = tmp_path / f"{model}_{pid}.png"
            image.write_bytes(b"not-a-real-png")  # tasks never open the files
            rows.append({"prompt_id": pid, "uri": image.name})
        path = tmp_path / f"images_{model}.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        maps[model] = path
    return maps


def test_eval_cli_round_trip(tmp_path):
    prompts_path = tmp_path / "prompts.jsonl"
    rc = main_eval_ab(["gen-prompts", "--n", "8", "--seed", "4",
                       "--out", str(prompts_path)])
    assert rc == 0
    maps = write_image_maps(tmp_path, prompts_path)

    state_dir = tmp_path / "state"
    rc = main_eval_ab(["build-tasks", "--prompts", str(prompts_path),
                       "--images-x", str(maps["x"]), "--images-y", str(maps["y"]),
                       "--metric", "visual_appeal", "--seed", "1",
                       "--state", str(state_dir)])
    assert rc == 0
    tasks = [json.loads(line)
             for line in (state_dir / "tasks.jsonl").read_text().splitlines()]
    assert len(tasks) == 8

    # judge the first two tasks through the state the CLI will reload
    state = open_state(state_dir)
    for verdicts, task in zip((["A"] * 5, ["Tie", "B", "B", "A", "B"]), tasks):
        for i, verdict in enumerate(verdicts):
            state.add_judgment(
                PreferenceJudgment(task["task_id"], f"ann{i}", verdict, ts=float(i))
            )
    state.close()

    report_path = tmp_path / "report.json"
    rc = main_eval_ab(["report", "--state", str(state_dir),
                       "--out", str(report_path)])
    assert rc == 0
    report = json.loads(report_path.read_text())
    row = report["rows"]["open-user-input-like/visual_appeal/all"]
    assert row["n_tasks"] == 2
    winners = (tasks[0]["assignment"]["A"], tasks[1]["assignment"]["B"])
    expected_wins = sum(1 for w in winners if w == "x")
    assert row["wins"] == expected_wins
    assert row["wins"] + row["losses"] == 2

    # byte-identical re-render from the same log
    rerun_path = tmp_path / "report2.json"
    main_eval_ab(["report", "--state", str(state_dir), "--out", str(rerun_path)])
    assert rerun_path.read_bytes() == report_path.read_bytes()

    # stylized slice filters rows
    rc = main_eval_ab(["report", "--state", str(state_dir), "--slice", "stylized",
                       "--out", str(tmp_path / "sty.json")])
    assert rc == 0
    sty = json.loads((tmp_path / "sty.json").read_text())
    assert all(k.endswith("/stylized") for k in sty["rows"])
