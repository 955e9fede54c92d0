"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to watch them live).

The two long checks are the 1000-fragment calibration sweep and the
desk-scale training run; both stay inside their stated wall-clock
budgets on a single CPU core.
"""

import time

import mpmath
import numpy as np
import pytest

from fragsleuth.corpus import sample_chunks, read_fragment, SamplerConfig
from fragsleuth.corpus.chunks import Fragment
from fragsleuth.classifier import (
    FragmentClassifier,
    TrainConfig,
    checkpoint_from_model,
    load_checkpoint,
    model_from_checkpoint,
    save_checkpoint,
    train,
)
from fragsleuth.cli import main as cli_main
from fragsleuth.evaluation import confusion_from_predictions, evaluate
from fragsleuth.nn import AdamConfig, adam_step
from fragsleuth.nn.layers import softmax_xent
from fragsleuth.randtest import (
    CANONICAL_ORDER,
    FAIL,
    INAPPLICABLE,
    PASS,
    StsConfig,
    bits_from_string,
    run_suite,
)
from fragsleuth.randtest.report import ChunkReport, aggregate_pass_rate
from fragsleuth.randtest.suite import frequency, runs
from fragsleuth.seeding import rng_for

SEED = "1.3035772690"
FORCED_QUARTET = ("rank", "overlapping_template", "universal", "linear_complexity")


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"criterion {number} {name}: {detail}"


def random_fragment(stream: str, i: int) -> Fragment:
    return Fragment(rng_for(stream, str(i)).fill_bytes(4096), "random", ("mem", i))


@pytest.mark.slow
def test_criterion_1_sts_calibration():
    """Applicable tests pass >= 97% of 1000 seeded random fragments."""
    started = time.time()
    cfg = StsConfig(paper_mode=False)
    passes: dict[str, int] = {name: 0 for name in CANONICAL_ORDER}
    applicable: dict[str, int] = {name: 0 for name in CANONICAL_ORDER}
    n_fragments = 1000
    for i in range(n_fragments):
        for result in run_suite(random_fragment("acceptance-calibration", i), cfg):
            if result.verdict == INAPPLICABLE:
                continue
            applicable[result.test_name] += 1
            passes[result.test_name] += result.verdict == PASS
    elapsed = time.time() - started

    lines = []
    ok = elapsed < 600
    for name in CANONICAL_ORDER:
        if applicable[name] >= 100:
            rate = passes[name] / applicable[name]
            lines.append(f"{name}={rate:.3f}")
            ok &= rate >= 0.97
        else:
            # the excursion pair is applicable only when the walk has
            # >= 500 zero crossings (~1% of 32768-bit inputs); the four
            # under-length tests are never applicable at this size
            lines.append(f"{name}=n/a[{applicable[name]}]")
    report(1, "sts-calibration", ok, f"{elapsed:.0f}s; " + " ".join(lines))


def test_criterion_2_sts_worked_examples():
    """Monobit and runs reproduce the reference p-values within 1e-4."""
    mpmath.mp.dps = 30
    monobit_p = frequency(bits_from_string("1011010101"), StsConfig()).p_values[0]
    monobit_oracle = float(mpmath.erfc(mpmath.mpf(2) / mpmath.sqrt(10) / mpmath.sqrt(2)))
    runs_p = runs(bits_from_string("1001101011"), StsConfig()).p_values[0]
    pi = mpmath.mpf(6) / 10
    runs_oracle = float(
        mpmath.erfc(abs(7 - 2 * 10 * pi * (1 - pi)) / (2 * mpmath.sqrt(20) * pi * (1 - pi)))
    )
    ok = (
        abs(monobit_p - 0.527089) <= 1e-4
        and abs(monobit_p - monobit_oracle) <= 1e-10
        and abs(runs_p - 0.147232) <= 1e-4
        and abs(runs_p - runs_oracle) <= 1e-10
    )
    report(2, "sts-worked-examples", ok, f"monobit={monobit_p:.6f} runs={runs_p:.6f}")


def test_criterion_3_random_reference_pattern():
    """Random fragments fail the under-length quartet and pass >= 10/15."""
    cfg = StsConfig(paper_mode=True)
    quartet_ok = 0
    ten_of_fifteen = 0
    n_fragments = 100
    for i in range(n_fragments):
        results = run_suite(random_fragment("acceptance-reference", i), cfg)
        verdicts = {r.test_name: r.verdict for r in results}
        if all(verdicts[name] in (FAIL, INAPPLICABLE) for name in FORCED_QUARTET):
            quartet_ok += 1
        if sum(1 for r in results if r.verdict == PASS) >= 10:
            ten_of_fifteen += 1
    ok = quartet_ok == n_fragments and ten_of_fifteen >= 0.8 * n_fragments
    report(
        3,
        "random-reference-pattern",
        ok,
        f"quartet fails on {quartet_ok}/100, >=10/15 on {ten_of_fifteen}/100",
    )


def test_criterion_4_per_tool_entropy_ordering(desk_corpus):
    """Desk-corpus pass rates order compress < lz4 < bzip2."""
    selected = sample_chunks(desk_corpus.index, SamplerConfig(SEED, 30))
    cfg = StsConfig(paper_mode=True)
    chunks = [
        ChunkReport(
            f"{rec.path}:{rec.ordinal}", rec.label, run_suite(read_fragment(desk_corpus.out, rec), cfg)
        )
        for rec in selected
    ]
    rates = aggregate_pass_rate(chunks)
    ok = (
        rates["compress"] < rates["lz4"] < rates["bzip2"]
        and rates["compress"] <= 0.30
        and rates["bzip2"] >= 0.45
    )
    detail = " ".join(f"{tool}={rates[tool]:.3f}" for tool in ("compress", "lz4", "bzip2", "gzip"))
    report(4, "per-tool-entropy-ordering", ok, detail)


def test_criterion_5_gradient_suite():
    """Every layer backward matches central finite differences."""
    from test_nn_grad import central_diff, rel_err
    from fragsleuth.nn import (
        conv2d_backward,
        conv2d_forward,
        dense_backward,
        dense_forward,
        maxpool2_backward,
        maxpool2_forward,
    )

    rng = np.random.default_rng(515)
    worst = 0.0
    trials = 0

    for _ in range(8):  # conv shapes
        n, h, w, c, f = (int(rng.integers(1, 3)), int(rng.integers(2, 5)),
                         int(rng.integers(2, 5)), int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        x, k, b = rng.standard_normal((n, h, w, c)), rng.standard_normal((3, 3, c, f)), rng.standard_normal(f)
        up = rng.standard_normal((n, h, w, f))
        loss = lambda: float((conv2d_forward(x, k, b)[0] * up).sum())
        _, cache = conv2d_forward(x, k, b)
        gx, gk, gb = conv2d_backward(up, cache)
        for analytic, var in ((gx, x), (gk, k), (gb, b)):
            worst = max(worst, rel_err(analytic, central_diff(loss, var)))
        trials += 1

    for _ in range(8):  # dense shapes
        n, d, u = int(rng.integers(1, 5)), int(rng.integers(1, 6)), int(rng.integers(1, 6))
        x, w, b = rng.standard_normal((n, d)), rng.standard_normal((d, u)), rng.standard_normal(u)
        up = rng.standard_normal((n, u))
        loss = lambda: float((dense_forward(x, w, b)[0] * up).sum())
        _, cache = dense_forward(x, w, b)
        gx, gw, gb = dense_backward(up, cache)
        for analytic, var in ((gx, x), (gw, w), (gb, b)):
            worst = max(worst, rel_err(analytic, central_diff(loss, var)))
        trials += 1

    for _ in range(4):  # pooling, nudged off ties
        x = rng.standard_normal((1, 4, 4, 2)) * 3 + np.arange(32).reshape(1, 4, 4, 2) * 1e-2
        up = rng.standard_normal((1, 2, 2, 2))
        loss = lambda: float((maxpool2_forward(x)[0] * up).sum())
        _, cache = maxpool2_forward(x)
        worst = max(worst, rel_err(maxpool2_backward(up, cache), central_diff(loss, x)))
        trials += 1

    for _ in range(4):  # softmax + cross-entropy
        n, k = int(rng.integers(1, 6)), int(rng.integers(2, 9))
        logits = rng.standard_normal((n, k))
        labels = rng.integers(0, k, n)
        loss = lambda: softmax_xent(logits, labels)[0]
        _, probs, grad = softmax_xent(logits, labels)
        worst = max(worst, rel_err(grad, central_diff(loss, logits)))
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        trials += 1

    uniform_loss, _, _ = softmax_xent(np.zeros((3, 8)), np.array([0, 4, 7]))
    ok = trials >= 20 and worst < 1e-4 and abs(uniform_loss - np.log(8)) < 1e-9
    report(5, "gradient-suite", ok, f"{trials} shapes, max rel err {worst:.2e}")


def test_criterion_6_overfit_sixteen_samples():
    """100% training accuracy on 16 fixed samples within 200 Adam steps."""
    model = FragmentClassifier.build(["a", "b", "c", "d"], SEED)
    images = np.stack(
        [
            np.frombuffer(rng_for("acceptance-overfit", str(i)).fill_bytes(4096), np.uint8)
            .astype(np.float32)
            .reshape(64, 64)
            / 255.0
            for i in range(16)
        ]
    )[..., None]
    labels = np.array([i % 4 for i in range(16)])
    adam = AdamConfig()
    reached = None
    for step in range(1, 201):
        loss, probs = model.loss_and_grads(images, labels)
        if (probs.argmax(axis=1) == labels).all():
            reached = step
            break
        adam_step(model.params, adam)
    report(6, "overfit-sanity", reached is not None, f"100% at step {reached}")


@pytest.mark.slow
def test_criterion_7_desk_scale_learning(desk_corpus):
    """2000 train + 500 val chunks per class: best val accuracy >= 2/K
    and compress recall >= 0.70 within the 1h budget."""
    started = time.time()
    cfg = TrainConfig(
        epochs=5, batch_size=64, val_fraction=0.2, seed=SEED, per_class=2500, early_stop=False
    )
    result = train(desk_corpus.index, desk_corpus.out, cfg, AdamConfig())
    k = len(result.checkpoint.class_names)
    baseline = 1.0 / k
    best_val = result.checkpoint.val_accuracy

    model = model_from_checkpoint(result.checkpoint)
    ev = evaluate(model, result.val_records, desk_corpus.out)
    compress_recall = ev.recalls["compress"]
    elapsed = time.time() - started

    # criterion 10 consistency on this real run
    assert ev.confusion.total == len(result.val_records)
    direct = sum(1 for t, p in zip(ev.true_labels, ev.predicted) if t == p) / len(ev.true_labels)
    assert ev.confusion.accuracy == direct

    ok = (
        k >= 4
        and best_val >= 2 * baseline
        and compress_recall is not None
        and compress_recall >= 0.70
        and elapsed <= 3600
    )
    report(
        7,
        "desk-scale-learning",
        ok,
        f"K={k} best_val={best_val:.3f} (target {2 * baseline:.3f}) "
        f"compress_recall={compress_recall:.3f} elapsed={elapsed:.0f}s",
    )


def test_criterion_8_pipeline_determinism(tmp_path):
    """Two identical pipeline runs produce byte-identical artifacts."""
    outputs = []
    for run in ("one", "two"):
        base = tmp_path / run
        assert cli_main(["gen-synthetic", "--out", str(base / "src"), "--docs", "5",
                         "--min-kb", "48", "--max-kb", "128", "--seed", SEED]) == 0
        assert cli_main(["build-corpus", "--source", str(base / "src"),
                         "--out", str(base / "corpus"), "--seed", SEED,
                         "--tools", "gzip,bzip2,compress,lz4"]) == 0
        assert cli_main(["train", "--index", str(base / "corpus/chunks.tsv"),
                         "--out", str(base / "model"), "--seed", SEED,
                         "--per-class", "48", "--epochs", "2", "--batch-size", "16",
                         "--val-fraction", "0.25", "--no-figures"]) == 0
        from fragsleuth.corpus import read_chunk_index

        index = read_chunk_index(base / "corpus/chunks.tsv")
        selection = sample_chunks(index, SamplerConfig(SEED, 10))
        initial = FragmentClassifier.build(["bzip2", "compress", "gzip", "lz4"], SEED)
        weights = b"".join(
            initial.params.value(name).tobytes() for name in initial.params.names()
        )
        outputs.append(
            {
                "manifest": (base / "corpus/manifest.tsv").read_bytes(),
                "chunks": (base / "corpus/chunks.tsv").read_bytes(),
                "selection": [(r.path, r.ordinal) for r in selection],
                "weights": weights,
                "epoch_log": (base / "model/epoch_log.csv").read_bytes(),
            }
        )
    first, second = outputs
    same = {key: first[key] == second[key] for key in first}
    report(8, "pipeline-determinism", all(same.values()),
           " ".join(f"{key}={'ok' if v else 'DIFFERS'}" for key, v in same.items()))


def test_criterion_9_checkpoint_roundtrip(tmp_path):
    """save -> load -> predict is bit-identical on 100 fragments."""
    model = FragmentClassifier.build(["bzip2", "compress", "gzip", "lz4"], SEED)
    images = np.stack(
        [
            np.frombuffer(rng_for("acceptance-roundtrip", str(i)).fill_bytes(4096), np.uint8)
            .astype(np.float32)
            .reshape(64, 64)
            / 255.0
            for i in range(100)
        ]
    )[..., None]
    before = model.predict_proba(images)
    path = tmp_path / "model.fslc"
    save_checkpoint(checkpoint_from_model(model, 1, 0.0, SEED), path)
    after = model_from_checkpoint(load_checkpoint(path)).predict_proba(images)
    ok = np.array_equal(before, after)
    report(9, "checkpoint-roundtrip", ok, "bitwise-identical probabilities on 100 fragments")


def test_criterion_10_confusion_consistency():
    """Row sums equal class counts; trace/total equals direct accuracy."""
    rng = np.random.default_rng(1010)
    classes = ["bzip2", "compress", "gzip", "lz4", "zip"]
    ok = True
    for trial in range(25):
        n = int(rng.integers(1, 400))
        true = [classes[i] for i in rng.integers(0, len(classes), n)]
        predicted = [classes[i] for i in rng.integers(0, len(classes), n)]
        cm = confusion_from_predictions(true, predicted, classes)
        for i, name in enumerate(classes):
            ok &= int(cm.row_sums()[i]) == true.count(name)
        direct = sum(1 for t, p in zip(true, predicted) if t == p) / n
        ok &= cm.accuracy == direct
    report(10, "confusion-consistency", ok, "25 randomized evaluation sets, exact equality")
