"""End-to-end checks of the package's headline behaviors.

Every test here crosses module boundaries on purpose, with pinned seeds:
codec quality ordering across latent widths, exactness of the channel lift
and offset noising, the quality-tuning contrast shift, curation-funnel
oracle equivalence, preference-report arithmetic, gradient correctness, and
byte-level determinism of each artifact-producing path.  The two training
experiments dominate the runtime (a few minutes total on CPU).
"""

import json
import random

import numpy as np
import pytest
import torch
from scipy import stats

from latentlab.autoencoder.config import AEConfig
from latentlab.autoencoder.fourier import fourier_lift
from latentlab.autoencoder.model import Autoencoder
from latentlab.autoencoder.train import run_channel_ablation
from latentlab.curation.filters import apply_predicate_filters
from latentlab.curation.records import (
    CHECKLIST_ITEMS,
    CascadeConfig,
    ChecklistVerdict,
    CurationStage,
)
from latentlab.curation.scoring import synthetic_records
from latentlab.curation.store import CurationStore
from latentlab.data.images import write_image_dataset
from latentlab.data.synthetic import (
    contrast_field_images,
    image_contrast,
    texture_shape_images,
)
from latentlab.diffusion.denoiser import Denoiser, DenoiserConfig
from latentlab.diffusion.noising import add_noise_with_offset
from latentlab.diffusion.schedule import cosine_schedule
from latentlab.diffusion.train import TrainConfig, pretrain
from latentlab.evalharness import (
    METRICS,
    VERDICTS,
    ComparisonTask,
    EvalState,
    PreferenceJudgment,
    build_task_set,
    compute_report,
    generate_prompt_set,
    render_report,
)
from latentlab.evalharness.aggregate import aggregate_task
from latentlab.qtune import (
    HARD_ITERATION_CAP,
    DiffusionBackbone,
    QTuneConfig,
    make_ablation_subsets,
    quality_tune,
)


# --------------------------------------------------------------------------
# reconstruction quality vs latent width


def test_latent_width_ablation_ordering():
    """Wider latents reconstruct strictly better: SSIM/PSNR up, FID down."""
    train = texture_shape_images(5000, resolution=32, seed=100)
    held_out = texture_shape_images(256, resolution=32, seed=101)
    base = AEConfig(latent_channels=4, downsample_blocks=3, base_width=16)
    results = run_channel_ablation(
        train, held_out, [4, 8, 16], steps=600, seed=5,
        base_config=base, batch_size=32, learning_rate=2e-3,
    )
    ssim = [results[c].ssim for c in (4, 8, 16)]
    psnr = [results[c].psnr for c in (4, 8, 16)]
    fid = [results[c].fid for c in (4, 8, 16)]
    assert ssim[0] < ssim[1] < ssim[2]
    assert psnr[0] < psnr[1] < psnr[2]
    assert fid[0] > fid[1] > fid[2]
    assert ssim[2] - ssim[0] >= 0.02


# --------------------------------------------------------------------------
# channel lift exactness


def test_channel_lift_pass_through_and_oracle():
    """First 3 output channels are the input bit-for-bit; the sin/cos blocks
    match an independently computed table elementwise."""
    gen = torch.Generator().manual_seed(77)
    worst = 0.0
    for _ in range(100):
        img = torch.rand((3, 9, 7), generator=gen, dtype=torch.float64) * 2 - 1
        out = fourier_lift(img, num_freqs=3)
        assert out.shape == (3 + 6 * 3, 9, 7)
        assert torch.equal(out[:3], img)

        x = img.numpy()
        expect = [x]
        for j in range(3):
            expect.append(np.sin((2.0**j) * np.pi * x))
            expect.append(np.cos((2.0**j) * np.pi * x))
        diff = np.abs(out.numpy() - np.concatenate(expect, axis=0)).max()
        worst = max(worst, float(diff))
    assert worst <= 1e-12


# --------------------------------------------------------------------------
# offset noising: zero-offset equivalence + channel-mean variance


def test_offset_noising_bit_equivalence_and_variance():
    sched = cosine_schedule(50)
    x0 = torch.randn(4, 3, 8, 8, generator=torch.Generator().manual_seed(5))
    t = torch.tensor([0, 10, 25, 49])

    # offset=0 consumes exactly one noise draw and matches standard noising
    g1 = torch.Generator().manual_seed(123)
    x_t, eps_target = add_noise_with_offset(x0, t, sched, 0.0, g1)
    g2 = torch.Generator().manual_seed(123)
    eps = torch.randn(x0.shape, generator=g2)
    ab = torch.as_tensor(sched.alpha_bar, dtype=x0.dtype)[t].view(-1, 1, 1, 1)
    assert torch.equal(eps_target, eps)
    assert torch.equal(x_t, torch.sqrt(ab) * x0 + torch.sqrt(1.0 - ab) * eps)

    # channel means of the training target: var = offset^2 + 1/(H*W)
    offset, hw = 0.1, 8 * 8
    g = torch.Generator().manual_seed(9)
    zeros = torch.zeros(4, 8, 8)
    means = []
    for _ in range(10_000):
        _, target = add_noise_with_offset(zeros, 3, sched, offset, g)
        means.append(target.mean(dim=(1, 2)))
    sample = torch.stack(means).double().numpy().ravel()
    expected = offset**2 + 1.0 / hw
    se = expected * np.sqrt(2.0 / (sample.size - 1))
    assert abs(np.var(sample, ddof=1) - expected) <= 3 * se


# --------------------------------------------------------------------------
# quality tuning shifts sample statistics toward the curated slice


def test_quality_tuning_shifts_sample_statistics(tmp_path):
    """Tuning on the top-contrast decile raises the contrast of samples."""
    images, contrasts = contrast_field_images(
        1200, resolution=16, seed=200, contrast_range=(0.1, 1.0)
    )
    caption = "a smooth color field"

    config = DenoiserConfig(base_channels=16, res_blocks_per_stage=1, stages=2,
                            cond_dim_a=8, cond_dim_b=12, in_channels=3)
    backbone = DiffusionBackbone(
        Denoiser.create(config, seed=6), cosine_schedule(200),
        autoencoder=None, image_size=16, sample_steps=12,
        learning_rate=2e-3, seed=6,
    )
    rng = np.random.default_rng(6)
    for _ in range(2500):
        idx = rng.choice(len(images), size=16, replace=False)
        backbone.train_step((images[idx], [caption] * 16), noise_offset=0.0)

    pre = np.stack([backbone.sample(caption, seed=s) for s in range(256)])

    top = np.argsort(contrasts)[::-1][:120]  # top decile by contrast
    manifest = write_image_dataset(
        images[top], [caption] * len(top), ["field"] * len(top),
        tmp_path / "quality",
    )
    tune_config = QTuneConfig(batch_size=64, noise_offset=0.1,
                              max_iterations=800, eval_every=200,
                              learning_rate=2e-3, seed=7)
    _, report = quality_tune(backbone, manifest, tune_config, tmp_path / "out")
    assert report["steps_run"] == 800
    assert report["steps_run"] <= HARD_ITERATION_CAP
    assert report["stop_reason"] == "cap"

    post = np.stack([backbone.sample(caption, seed=s) for s in range(256)])
    pre_c, post_c = image_contrast(pre), image_contrast(post)
    result = stats.ttest_rel(post_c, pre_c, alternative="greater")
    assert post_c.mean() > pre_c.mean()
    assert result.pvalue < 0.01


def test_iteration_cap_is_a_hard_contract():
    with pytest.raises(ValueError, match="cap"):
        QTuneConfig(max_iterations=HARD_ITERATION_CAP + 1)
    assert QTuneConfig(max_iterations=HARD_ITERATION_CAP).max_iterations == 15_000


def _tiny_pixel_backbone(seed: int = 3) -> DiffusionBackbone:
    config = DenoiserConfig(base_channels=8, res_blocks_per_stage=1, stages=1,
                            cond_dim_a=8, cond_dim_b=12, in_channels=3)
    return DiffusionBackbone(
        Denoiser.create(config, seed=seed), cosine_schedule(50),
        autoencoder=None, image_size=8, sample_steps=2,
        learning_rate=1e-3, seed=seed,
    )


def test_dataset_size_ablation_runs_end_to_end(tmp_path):
    """Nested 100/1000/2000 subsets, each trainable through the same loop."""
    images = contrast_field_images(2000, resolution=8, seed=44)[0]
    manifest = write_image_dataset(
        images, ["field"] * 2000, ["field"] * 2000, tmp_path / "data"
    )
    rows = [json.loads(line) for line in manifest.read_text().splitlines()]

    sizes = [100, 1000, 2000]
    subsets = make_ablation_subsets(rows, sizes, seed=11)
    assert [len(s) for s in subsets] == sizes
    ids = [{r["id"] for r in s} for s in subsets]
    assert ids[0] < ids[1] < ids[2]  # proper nesting

    for size in sizes:
        config = QTuneConfig(batch_size=8, noise_offset=0.1, max_iterations=2,
                             eval_every=2, learning_rate=1e-3, seed=9,
                             subset_size=size)
        _, report = quality_tune(
            _tiny_pixel_backbone(), manifest, config, tmp_path / f"run-{size}"
        )
        assert report["subset_size"] == size
        assert report["dataset_size"] == size
        assert report["steps_run"] == 2


# --------------------------------------------------------------------------
# curation funnel vs brute force


def test_curation_survivors_match_brute_force_conjunction():
    records = synthetic_records(10_000, seed=9, malformed_every=97)
    config = CascadeConfig()
    store = CurationStore(config)
    store.ingest(records, ts=0.0)
    store.run_auto_cascade(ts=1.0)

    def survives(r) -> bool:
        return (
            r.width >= 1
            and r.height >= 1
            and r.aesthetic_score >= 0.5
            and r.clip_score >= 0.25
            and r.ocr_word_count <= 10
            and min(r.width, r.height) >= 512
            and 0.5 <= r.width / r.height <= 2.0
        )

    oracle = {r.id for r in records if survives(r)}
    passed = {r.id for r in store.by_stage(CurationStage.AUTO_PASSED)}
    assert passed == oracle
    assert len(oracle) > 100  # the comparison is not vacuous


def test_filter_order_cannot_change_survivors():
    records = synthetic_records(3000, seed=21, malformed_every=41)
    config = CascadeConfig()
    survivors, _ = apply_predicate_filters(records, config)
    expected = {r.id for r in survivors}

    checks = [
        lambda r: r.aesthetic_score >= config.aesthetic_min,
        lambda r: r.clip_score >= config.clip_min,
        lambda r: r.ocr_word_count <= config.ocr_max_words,
        lambda r: min(r.width, r.height) >= config.min_side_px,
        lambda r: config.aspect_ratio_min <= r.aspect_ratio <= config.aspect_ratio_max,
    ]
    for perm_seed in range(5):
        order = list(checks)
        random.Random(perm_seed).shuffle(order)
        longhand = {
            r.id for r in records
            if not r.problems() and all(check(r) for check in order)
        }
        assert longhand == expected


def test_funnel_budgets_bind_at_20000_and_2000():
    """21k permissive candidates: 20000 stage-1 keeps, 2000 final selections."""
    config = CascadeConfig(aesthetic_min=0.0, clip_min=0.0, ocr_max_words=100,
                           min_side_px=1, aspect_ratio_min=0.01,
                           aspect_ratio_max=100.0)
    store = CurationStore(config)
    store.ingest(synthetic_records(21_000, seed=13), ts=0.0)
    summary = store.run_auto_cascade(ts=1.0)
    assert summary["auto_passed"] == 21_000

    for r in store.by_stage(CurationStage.AUTO_PASSED):
        store.stage1_review(r.id, "keep", annotator_id="ann-1", ts=2.0)
    kept = store.by_stage(CurationStage.STAGE1_KEPT)
    assert len(kept) == 20_000
    assert store.funnel_stats()["rejections"]["stage1"] == {"budget": 1000}

    answers = dict.fromkeys(CHECKLIST_ITEMS, True)
    for r in kept:
        store.stage2_review(
            r.id,
            ChecklistVerdict(**answers, annotator_id="ann-2", timestamp=3.0),
            ts=3.0,
        )
    assert len(store.by_stage(CurationStage.SELECTED)) == 2000
    assert store.funnel_stats()["rejections"]["stage2"] == {"budget": 18_000}


def test_event_replay_is_idempotent():
    config = CascadeConfig()
    store = CurationStore(config)
    store.ingest(synthetic_records(800, seed=17, malformed_every=50), ts=0.0)
    store.run_auto_cascade(ts=1.0)
    passed = store.by_stage(CurationStage.AUTO_PASSED)
    for i, r in enumerate(passed):
        store.stage1_review(r.id, "keep" if i % 3 else "reject", "ann-1", ts=2.0)
    answers = dict.fromkeys(CHECKLIST_ITEMS, True)
    for i, r in enumerate(store.by_stage(CurationStage.STAGE1_KEPT)):
        verdict = dict(answers)
        if i % 3 == 0:
            verdict["lighting"] = False
        store.stage2_review(
            r.id, ChecklistVerdict(**verdict, annotator_id="ann-2"), ts=3.0
        )
    for r in store.by_stage(CurationStage.SELECTED):
        store.set_curated_caption(r.id, f"curated {r.id}", "ann-3", ts=4.0)

    once = CurationStore.replay(store.events, config)
    twice = CurationStore.replay(store.events + store.events, config)
    want = {r.id: r.stage for r in store.records.values()}
    assert {r.id: r.stage for r in once.records.values()} == want
    assert {r.id: r.stage for r in twice.records.values()} == want
    assert once.funnel_stats() == twice.funnel_stats() == store.funnel_stats()


# --------------------------------------------------------------------------
# preference-report arithmetic


def _feed_verdicts(state: EvalState, task: ComparisonTask, want: str) -> None:
    """Submit a full set of judgments driving `task` to outcome `want`."""
    if want == "tie":
        if task.metric == "visual_appeal":
            verdicts = ["Tie"] * task.required_judgments
        else:
            verdicts = ["Both", "Neither", "Both"]
    else:
        side = next(s for s, m in task.assignment.items() if m == want)
        verdicts = [side] * task.required_judgments
    for i, verdict in enumerate(verdicts):
        state.add_judgment(PreferenceJudgment(task.task_id, f"ann-{i}", verdict))


@pytest.mark.parametrize(
    "source,metric,counts,expected",
    [
        ("open-user-input-like", "visual_appeal", (684, 21, 295), (68.4, 2.1, 29.5)),
        ("parti-like", "visual_appeal", (603, 15, 382), (60.3, 1.5, 38.2)),
        ("parti-like", "text_faithfulness", (1895, 56, 1049), (63.2, 1.9, 35.0)),
        ("open-user-input-like", "visual_appeal", (670, 26, 304), (67.0, 2.6, 30.4)),
        ("open-user-input-like", "text_faithfulness", (743, 41, 2216), (24.8, 1.4, 73.9)),
    ],
)
def test_preference_rows_from_constructed_logs(source, metric, counts, expected):
    wins, ties, losses = counts
    n = wins + ties + losses
    prompts = generate_prompt_set(n, seed=31, source=source)
    x_imgs = {p.id: f"x/{p.id}.png" for p in prompts}
    y_imgs = {p.id: f"y/{p.id}.png" for p in prompts}
    tasks = build_task_set(prompts, x_imgs, y_imgs, metric, seed=32)
    state = EvalState(tasks, prompts)

    desired = ["x"] * wins + ["tie"] * ties + ["y"] * losses
    for task, want in zip(tasks, desired):
        _feed_verdicts(state, task, want)

    report = compute_report(state.tagged_outcomes())
    row = report["rows"][f"{source}/{metric}/all"]
    assert (row["win_pct"], row["tie_pct"], row["lose_pct"]) == expected
    assert (row["wins"], row["ties"], row["losses"]) == counts
    drift = abs(row["win_pct"] + row["tie_pct"] + row["lose_pct"] - 100.0)
    assert drift <= 0.1 + 1e-9  # one-decimal rounding drift, plus float slack


def test_verdict_relabeling_and_order_invariance():
    """Judgment order never matters; flipping A/B labels flips the models;
    flipping labels and the hidden assignment together changes nothing."""
    swap = {"A": "B", "B": "A"}
    flip = {"x_wins": "y_wins", "y_wins": "x_wins", "tie": "tie"}
    rng = np.random.default_rng(2026)
    for _ in range(1000):
        metric = METRICS[int(rng.integers(2))]
        assignment = (
            {"A": "x", "B": "y"} if rng.integers(2) else {"A": "y", "B": "x"}
        )
        task = ComparisonTask(task_id="t-0", prompt_id="p-0", metric=metric,
                              image_a_ref="a.png", image_b_ref="b.png",
                              assignment=assignment)
        options = VERDICTS[metric]
        verdicts = [
            options[int(k)]
            for k in rng.integers(0, len(options), size=task.required_judgments)
        ]
        judgments = [
            PreferenceJudgment("t-0", f"ann-{i}", v) for i, v in enumerate(verdicts)
        ]
        outcome = aggregate_task(task, judgments)

        shuffled = [judgments[i] for i in rng.permutation(len(judgments))]
        assert aggregate_task(task, shuffled) == outcome

        swapped = [
            PreferenceJudgment("t-0", j.annotator_id, swap.get(j.verdict, j.verdict))
            for j in judgments
        ]
        assert aggregate_task(task, swapped) == flip[outcome]

        mirrored = ComparisonTask(
            task_id="t-0", prompt_id="p-0", metric=metric,
            image_a_ref="b.png", image_b_ref="a.png",
            assignment={"A": assignment["B"], "B": assignment["A"]},
        )
        assert aggregate_task(mirrored, swapped) == outcome


# --------------------------------------------------------------------------
# analytic gradients vs central differences


def _check_gradients(model, loss_fn, seed, checks=20, h=1e-6):
    model.zero_grad()
    loss_fn().backward()
    params = [p for p in model.parameters() if p.grad is not None]
    rng = np.random.default_rng(seed)
    done = 0
    with torch.no_grad():
        while done < checks:
            p = params[int(rng.integers(len(params)))]
            ei = int(rng.integers(p.numel()))
            analytic = p.grad.flatten()[ei].item()
            if abs(analytic) < 1e-6:
                continue
            orig = p.view(-1)[ei].item()
            p.view(-1)[ei] = orig + h
            up = loss_fn().item()
            p.view(-1)[ei] = orig - h
            down = loss_fn().item()
            p.view(-1)[ei] = orig
            numeric = (up - down) / (2 * h)
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric))
            assert rel <= 1e-3, f"analytic {analytic} vs numeric {numeric}"
            done += 1


def test_training_losses_agree_with_finite_differences():
    config = DenoiserConfig(base_channels=4, res_blocks_per_stage=1, stages=1,
                            cond_dim_a=4, cond_dim_b=6, in_channels=2)
    den = Denoiser.create(config, seed=3).double()
    gen = torch.Generator().manual_seed(11)
    x = torch.randn(2, 2, 4, 4, generator=gen, dtype=torch.float64)
    t = torch.tensor([2, 7])
    ca = torch.randn(2, 3, 4, generator=gen, dtype=torch.float64)
    cb = torch.randn(2, 3, 6, generator=gen, dtype=torch.float64)
    eps = torch.randn(2, 2, 4, 4, generator=gen, dtype=torch.float64)
    _check_gradients(
        den,
        lambda: torch.nn.functional.mse_loss(den(x, t, ca, cb), eps),
        seed=0,
    )

    torch.manual_seed(0)
    ae = Autoencoder(AEConfig(latent_channels=2, downsample_blocks=1, base_width=4))
    ae = ae.double()
    imgs = torch.from_numpy(
        texture_shape_images(2, resolution=8, seed=1).astype(np.float64)
    )
    _check_gradients(
        ae,
        lambda: torch.mean((ae.decode_batch(ae.encode_batch(imgs), clamp=False) - imgs) ** 2),
        seed=1,
    )


# --------------------------------------------------------------------------
# byte-level determinism of every artifact-producing path


def _pretrain_once(tmp_path, tag):
    torch.manual_seed(0)
    ae = Autoencoder(AEConfig(latent_channels=2, downsample_blocks=1, base_width=4))
    den = Denoiser.create(
        DenoiserConfig(base_channels=8, res_blocks_per_stage=1, stages=1,
                       cond_dim_a=8, cond_dim_b=12, in_channels=2),
        seed=1,
    )
    images = texture_shape_images(12, resolution=16, seed=3)
    captions = [f"texture {i}" for i in range(12)]
    config = TrainConfig(resolutions=[(16, 6)], noise_offset=0.02, batch_size=4,
                         learning_rate=1e-3, seed=5)
    paths, _ = pretrain(den, ae, images, captions, config, tmp_path / tag,
                        schedule=cosine_schedule(40))
    return paths[-1].read_bytes()


def test_pretraining_is_byte_deterministic(tmp_path):
    assert _pretrain_once(tmp_path, "one") == _pretrain_once(tmp_path, "two")


def _tune_once(tmp_path, tag):
    images = contrast_field_images(12, resolution=8, seed=5)[0]
    manifest = write_image_dataset(
        images, ["field"] * 12, ["field"] * 12, tmp_path / f"{tag}-data"
    )
    config = QTuneConfig(batch_size=4, noise_offset=0.1, max_iterations=4,
                         eval_every=2, learning_rate=1e-3, seed=7)
    ckpt, report = quality_tune(
        _tiny_pixel_backbone(seed=3), manifest, config, tmp_path / tag
    )
    return ckpt.read_bytes(), report["loss"]


def test_quality_tuning_is_byte_deterministic(tmp_path):
    bytes_a, loss_a = _tune_once(tmp_path, "one")
    bytes_b, loss_b = _tune_once(tmp_path, "two")
    assert bytes_a == bytes_b
    assert loss_a == loss_b


def _curate_once(tmp_path, tag):
    store = CurationStore(CascadeConfig())
    store.ingest(synthetic_records(400, seed=3), ts=0.0)
    store.run_auto_cascade(ts=1.0)
    for i, r in enumerate(store.by_stage(CurationStage.AUTO_PASSED)):
        store.stage1_review(r.id, "keep" if i % 4 else "reject", "ann-1", ts=2.0)
    answers = dict.fromkeys(CHECKLIST_ITEMS, True)
    for i, r in enumerate(store.by_stage(CurationStage.STAGE1_KEPT)):
        verdict = dict(answers)
        if i % 3 == 0:
            verdict["composition"] = False
        store.stage2_review(
            r.id, ChecklistVerdict(**verdict, annotator_id="ann-2"), ts=3.0
        )
    for r in store.by_stage(CurationStage.SELECTED):
        store.set_curated_caption(r.id, f"curated {r.id}", "ann-3", ts=4.0)
    events = store.save_events(tmp_path / f"{tag}-events.jsonl")
    export = store.export_quality_set(tmp_path / f"{tag}-quality.jsonl")
    return events.read_bytes(), export.read_bytes()


def test_curation_is_byte_deterministic(tmp_path):
    events_a, export_a = _curate_once(tmp_path, "one")
    events_b, export_b = _curate_once(tmp_path, "two")
    assert events_a == events_b
    assert export_a == export_b
    assert export_a  # some records actually got exported


def _eval_report_once() -> str:
    prompts = generate_prompt_set(60, seed=41, source="parti-like")
    x_imgs = {p.id: f"x/{p.id}.png" for p in prompts}
    y_imgs = {p.id: f"y/{p.id}.png" for p in prompts}
    tasks = build_task_set(prompts, x_imgs, y_imgs, "visual_appeal", seed=42)
    state = EvalState(tasks, prompts)
    wants = ["x", "y", "tie"]
    for i, task in enumerate(tasks):
        _feed_verdicts(state, task, wants[i % 3])
    return render_report(compute_report(state.tagged_outcomes()))


def test_preference_report_is_byte_deterministic():
    assert _eval_report_once() == _eval_report_once()
