import subprocess
import sys

import pytest

from fragsleuth.cli import main

SEED = "1.3035772690"


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """One shared tiny CLI pipeline: corpus -> sts -> train -> eval."""
    root = tmp_path_factory.mktemp("cli")
    src = root / "src"
    corpus = root / "corpus"
    assert run_cli("gen-synthetic", "--out", str(src), "--docs", "6",
                   "--min-kb", "48", "--max-kb", "128") == 0
    assert run_cli("build-corpus", "--source", str(src), "--out", str(corpus),
                   "--tools", "gzip,bzip2,compress,lz4") == 0
    return root


def test_gen_synthetic_and_build_outputs(pipeline):
    corpus = pipeline / "corpus"
    assert (corpus / "manifest.tsv").exists()
    assert (corpus / "chunks.tsv").exists()
    header = (corpus / "manifest.tsv").read_text().splitlines()[0]
    assert header == f"fragsleuth-manifest v1 seed={SEED}"
    for tool in ("gzip", "bzip2", "compress", "lz4"):
        assert any((corpus / tool).iterdir())


def test_build_corpus_manifest_bytes_reproducible(pipeline, tmp_path):
    out2 = tmp_path / "corpus2"
    assert run_cli("build-corpus", "--source", str(pipeline / "src"), "--out", str(out2),
                   "--tools", "gzip,bzip2,compress,lz4") == 0
    assert (out2 / "manifest.tsv").read_bytes() == (pipeline / "corpus/manifest.tsv").read_bytes()
    assert (out2 / "chunks.tsv").read_bytes() == (pipeline / "corpus/chunks.tsv").read_bytes()


def test_sts_reports(pipeline, tmp_path, capsys):
    report = tmp_path / "sts"
    rc = run_cli("sts", "--index", str(pipeline / "corpus/chunks.tsv"),
                 "--per-class", "3", "--report", str(report))
    assert rc == 0
    results = (report / "results.csv").read_text().splitlines()
    assert results[1] == "chunk_id,tool,test_name,min_p,verdict"
    assert len(results) == 2 + 4 * 3 * 15  # 4 tools x 3 chunks x 15 tests
    summary = (report / "summary.csv").read_text().splitlines()
    assert summary[1] == "tool,chunks,pass_rate"
    assert len(summary) == 2 + 4
    assert (report / "pass_rate.png").exists()


def test_sts_single_tool_single_chunk(pipeline, tmp_path):
    # single-tool index: 15 rows for one chunk; chunk paths resolve
    # relative to the index file, so it lives in the corpus directory
    index = pipeline / "corpus" / "single.tsv"
    lines = [l for l in (pipeline / "corpus/chunks.tsv").read_text().splitlines()
             if l.endswith("\tgzip")][:1]
    index.write_text("\n".join(lines) + "\n")
    report = tmp_path / "sts1"
    assert run_cli("sts", "--index", str(index), "--per-class", "1",
                   "--report", str(report), "--no-figures") == 0
    rows = (report / "results.csv").read_text().splitlines()[2:]
    assert len(rows) == 15


def test_sts_raw_reference_sample(pipeline, tmp_path):
    raw = tmp_path / "reference.bin"
    import os
    raw.write_bytes(os.urandom(4096))
    report = tmp_path / "sts-raw"
    assert run_cli("sts", "--raw", str(raw), "--report", str(report), "--no-figures") == 0
    rows = (report / "results.csv").read_text().splitlines()[2:]
    assert len(rows) == 15
    assert all(",reference," in row for row in rows)


def test_sts_raw_wrong_size_exits_4(tmp_path):
    raw = tmp_path / "short.bin"
    raw.write_bytes(b"x" * 100)
    assert run_cli("sts", "--raw", str(raw), "--report", str(tmp_path / "r")) == 4


def test_sts_insufficient_samples_exits_3(pipeline, tmp_path, capsys):
    rc = run_cli("sts", "--index", str(pipeline / "corpus/chunks.tsv"),
                 "--per-class", "999999", "--report", str(tmp_path / "r"))
    assert rc == 3
    err = capsys.readouterr().err
    assert err.startswith("error:data-insufficiency:")


@pytest.fixture(scope="module")
def trained(pipeline):
    model_dir = pipeline / "model"
    rc = run_cli("train", "--index", str(pipeline / "corpus/chunks.tsv"),
                 "--out", str(model_dir), "--per-class", "64", "--epochs", "1",
                 "--batch-size", "16", "--val-fraction", "0.25", "--no-figures")
    assert rc == 0
    return model_dir


def test_train_artifacts(trained):
    assert (trained / "checkpoint.fslc").exists()
    log = (trained / "epoch_log.csv").read_text().splitlines()
    assert log[0] == f"# fragsleuth-epoch-log v1 seed={SEED}"
    assert log[1] == "epoch,train_acc,val_acc,train_loss,val_loss"
    assert len(log) == 3  # one epoch row


def test_eval_reports_and_exit(pipeline, trained, tmp_path):
    out = tmp_path / "eval"
    rc = run_cli("eval", "--checkpoint", str(trained / "checkpoint.fslc"),
                 "--index", str(pipeline / "corpus/chunks.tsv"),
                 "--out", str(out), "--per-class", "5")
    assert rc == 0
    for name in ("confusion.csv", "confusion_pct.csv", "per_class.csv", "gallery.csv",
                 "confusion_matrix.png", "gallery.png"):
        assert (out / name).exists(), name


def test_eval_class_table_mismatch_exits_4(pipeline, trained, tmp_path, capsys):
    index = pipeline / "corpus" / "alien.tsv"
    lines = (pipeline / "corpus/chunks.tsv").read_text().splitlines()
    body = [l.replace("\tgzip", "\tzip") for l in lines if l.endswith("\tgzip")][:8]
    index.write_text("\n".join(body) + "\n")
    rc = run_cli("eval", "--checkpoint", str(trained / "checkpoint.fslc"),
                 "--index", str(index), "--out", str(tmp_path / "out"))
    assert rc == 4
    err = capsys.readouterr().err
    assert "zip" in err and "error:contract" in err


def test_predict_single_line_output(pipeline, trained, capsys):
    target = next((pipeline / "corpus/lz4").glob("*"))
    rc = run_cli("predict", "--checkpoint", str(trained / "checkpoint.fslc"), str(target))
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1
    label, confidence = out[0].split()
    assert label in ("gzip", "bzip2", "compress", "lz4")
    assert 0.0 < float(confidence) <= 1.0


def test_predict_verbose_probability_vector(pipeline, trained, capsys):
    target = next((pipeline / "corpus/gzip").glob("*"))
    rc = run_cli("predict", "--checkpoint", str(trained / "checkpoint.fslc"),
                 str(target), "--verbose")
    assert rc == 0
    out = capsys.readouterr().out
    assert "probabilities:" in out
    assert all(f"{t}=" in out for t in ("gzip", "bzip2", "compress", "lz4"))


def test_predict_short_file_exits_4(trained, tmp_path, capsys):
    small = tmp_path / "small.bin"
    small.write_bytes(b"x" * 100)
    assert run_cli("predict", "--checkpoint", str(trained / "checkpoint.fslc"), str(small)) == 4


def test_config_file_defaults_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("docs=3\nmin-kb=16\nmax-kb=24\n")
    out = tmp_path / "docs"
    assert run_cli("gen-synthetic", "--out", str(out), "--config", str(cfg), "--docs", "2") == 0
    files = list(out.iterdir())
    assert len(files) == 2  # explicit --docs wins over config's 3


def test_tool_cmd_external_template(tmp_path):
    (tmp_path / "src").mkdir()
    (tmp_path / "src/a.txt").write_bytes(b"some words " * 2000)
    rc = run_cli("build-corpus", "--source", str(tmp_path / "src"), "--out", str(tmp_path / "o"),
                 "--tools", "gzip", "--tool-cmd", "gzip=gzip -n -c {input}")
    assert rc == 0
    manifest = (tmp_path / "o/manifest.tsv").read_text()
    assert "\tgzip\t" in manifest and "gzip " in manifest  # probed external version string


def test_cli_entry_point_installed():
    proc = subprocess.run([sys.executable, "-m", "fragsleuth.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("gen-synthetic", "build-corpus", "sts", "train", "eval", "predict"):
        assert sub in proc.stdout
