"""Report arithmetic: one-decimal percentages, slices, conservation."""

import random

import pytest

from latentlab.evalharness import compute_report, render_report


def outcomes_from_counts(wins, ties, losses, source="parti-like",
                         metric="visual_appeal", stylized=False):
    rows = (
        [{"outcome": "x_wins"}] * wins
        + [{"outcome": "tie"}] * ties
        + [{"outcome": "y_wins"}] * losses
    )
    return [
        {**row, "source": source, "metric": metric, "stylized": stylized}
        for row in rows
    ]


@pytest.mark.parametrize(
    "wins,ties,losses,expected",
    [
        (684, 21, 295, (68.4, 2.1, 29.5)),
        (603, 15, 382, (60.3, 1.5, 38.2)),
        (670, 26, 304, (67.0, 2.6, 30.4)),
        (1895, 56, 1049, (63.2, 1.9, 35.0)),
        (743, 41, 2216, (24.8, 1.4, 73.9)),
    ],
)
def test_percentage_rows(wins, ties, losses, expected):
    report = compute_report(outcomes_from_counts(wins, ties, losses))
    row = report["rows"]["parti-like/visual_appeal/all"]
    assert (row["win_pct"], row["tie_pct"], row["lose_pct"]) == expected
    assert (row["wins"], row["ties"], row["losses"]) == (wins, ties, losses)
    assert row["n_tasks"] == wins + ties + losses


def test_all_ties_row():
    report = compute_report(outcomes_from_counts(0, 40, 0))
    row = report["rows"]["parti-like/visual_appeal/all"]
    assert (row["win_pct"], row["tie_pct"], row["lose_pct"]) == (0.0, 100.0, 0.0)


def test_empty_slice_is_null():
    report = compute_report(outcomes_from_counts(3, 1, 2, stylized=False))
    row = report["rows"]["parti-like/visual_appeal/stylized"]
    assert row["n_tasks"] == 0
    assert row["win_pct"] is None
    assert row["tie_pct"] is None
    assert row["lose_pct"] is None


def test_stylized_slice_counts_only_tagged():
    outcomes = outcomes_from_counts(4, 0, 0, stylized=True) + outcomes_from_counts(
        0, 0, 6, stylized=False
    )
    report = compute_report(outcomes)
    all_row = report["rows"]["parti-like/visual_appeal/all"]
    sty_row = report["rows"]["parti-like/visual_appeal/stylized"]
    assert (all_row["wins"], all_row["losses"]) == (4, 6)
    assert (sty_row["wins"], sty_row["losses"], sty_row["n_tasks"]) == (4, 0, 4)


def test_sources_and_metrics_make_separate_rows():
    outcomes = (
        outcomes_from_counts(1, 0, 0, source="parti-like", metric="visual_appeal")
        + outcomes_from_counts(0, 1, 0, source="open-user-input-like",
                               metric="text_faithfulness")
    )
    report = compute_report(outcomes)
    keys = set(report["rows"])
    # both sources x both metrics x both slices enumerated
    assert len(keys) == 8
    assert report["rows"]["open-user-input-like/visual_appeal/all"]["n_tasks"] == 0


def test_conservation_over_random_multisets():
    rng = random.Random(13)
    for _ in range(50):
        n = rng.randint(1, 400)
        wins = rng.randint(0, n)
        ties = rng.randint(0, n - wins)
        losses = n - wins - ties
        row = compute_report(outcomes_from_counts(wins, ties, losses))["rows"][
            "parti-like/visual_appeal/all"
        ]
        assert row["wins"] + row["ties"] + row["losses"] == row["n_tasks"] == n
        total = row["win_pct"] + row["tie_pct"] + row["lose_pct"]
        assert abs(total - 100.0) <= 0.1 + 1e-9


def test_half_up_rounding():
    # 5/8 = 62.5 exactly; 1/8 = 12.5 -> the .05 cases round up, not to even
    row = compute_report(outcomes_from_counts(5, 1, 2))["rows"][
        "parti-like/visual_appeal/all"
    ]
    assert (row["win_pct"], row["tie_pct"], row["lose_pct"]) == (62.5, 12.5, 25.0)
    row = compute_report(outcomes_from_counts(1, 0, 15))["rows"][
        "parti-like/visual_appeal/all"
    ]
    assert row["win_pct"] == 6.3  # 6.25 rounds half-up


def test_vote_totals_accumulate():
    outcomes = outcomes_from_counts(2, 1, 0)
    for i, o in enumerate(outcomes):
        o["votes"] = {"x": 3, "y": i, "tie": 1}
    row = compute_report(outcomes)["rows"]["parti-like/visual_appeal/all"]
    assert row["votes"] == {"x": 9, "y": 3, "tie": 3}


def test_report_order_independent_and_deterministic():
    outcomes = outcomes_from_counts(30, 5, 15) + outcomes_from_counts(
        4, 2, 9, source="open-user-input-like", stylized=True
    )
    text = render_report(compute_report(outcomes))
    shuffled = list(outcomes)
    random.Random(0).shuffle(shuffled)
    assert render_report(compute_report(shuffled)) == text


def test_unknown_outcome_rejected():
    with pytest.raises(ValueError, match="unknown outcome"):
        compute_report([{"outcome": "draw", "source": "parti-like",
                         "metric": "visual_appeal", "stylized": False}])
    with pytest.raises(ValueError, match="unknown slice"):
        compute_report([], slices=("weekly",))
