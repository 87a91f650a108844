"""Win/tie/lose tables over (prompt source × metric × stylized slice)."""

from __future__ import annotations

import json
from decimal import ROUND_HALF_UP, Decimal

from .aggregate import OUTCOMES

SLICES = ("all", "stylized")


def _pct(count: int, n: int) -> float:
    value = (Decimal(count) * 100 / Decimal(n)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )
    return float(value)


def _row(outcomes: list[dict]) -> dict:
    wins = sum(1 for o in outcomes if o["outcome"] == "x_wins")
    ties = sum(1 for o in outcomes if o["outcome"] == "tie")
    losses = sum(1 for o in outcomes if o["outcome"] == "y_wins")
    n = len(outcomes)
    row = {
        "n_tasks": n,
        "wins": wins,
        "ties": ties,
        "losses": losses,
        "win_pct": _pct(wins, n) if n else None,
        "tie_pct": _pct(ties, n) if n else None,
        "lose_pct": _pct(losses, n) if n else None,
    }
    votes = {"x": 0, "y": 0, "tie": 0}
    for o in outcomes:
        for k, v in o.get("votes", {}).items():
            votes[k] += v
    row["votes"] = votes
    return row


def compute_report(outcomes: list[dict], slices: tuple[str, ...] = SLICES) -> dict:
    """Aggregate tagged outcomes into per-slice win/tie/lose percentages.

    Each outcome dict carries: outcome ("x_wins"/"y_wins"/"tie"), source,
    metric, stylized, and optionally per-task vote counts.
    """
    for o in outcomes:
        if o["outcome"] not in OUTCOMES:
            raise ValueError(f"unknown outcome {o['outcome']!r}")
    for s in slices:
        if s not in SLICES:
            raise ValueError(f"unknown slice {s!r}")

    sources = sorted({o["source"] for o in outcomes})
    metrics = sorted({o["metric"] for o in outcomes})
    rows = {}
    for source in sources:
        for metric in metrics:
            pool = [
                o for o in outcomes
                if o["source"] == source and o["metric"] == metric
            ]
            for slice_name in slices:
                chosen = (
                    pool if slice_name == "all"
                    else [o for o in pool if o.get("stylized")]
                )
                rows[f"{source}/{metric}/{slice_name}"] = _row(chosen)
    return {"rows": rows, "n_outcomes": len(outcomes)}


def render_report(report: dict) -> str:
    """Canonical JSON: two reports built from the same log compare bytewise."""
    return json.dumps(report, indent=2, sort_keys=True)
