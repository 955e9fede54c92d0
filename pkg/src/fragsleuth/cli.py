"""Command-line entry point.

Subcommands cover the whole pipeline: gen-synthetic, build-corpus, sts,
train, eval, predict.  Every artifact embeds the seed that produced it,
no artifact embeds a timestamp, and rerunning a subcommand with the
same inputs reproduces its text outputs byte for byte.

Exit codes: 0 success, 1 I/O, 2 environment/tooling, 3 data
insufficiency, 4 contract mismatch.  Errors print one line to stderr
with a machine-parsable ``error:<category>:`` prefix.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import DEFAULT_SEED
from .errors import BadLength, EnvironmentError_, FragsleuthError
from .corpus import (
    build_chunk_index,
    build_manifest,
    discover_documents,
    generate_corpus,
    read_chunk_index,
    read_fragment,
    resolve_tools,
    sample_chunks,
    write_chunk_index,
    write_manifest,
    SamplerConfig,
    TOOL_IDS,
)
from .corpus.chunks import FRAGMENT_SIZE, Fragment
from .randtest import StsConfig, run_suite
from .randtest.report import ChunkReport, build_report, results_csv, summary_csv
from .classifier import (
    TrainConfig,
    load_checkpoint,
    model_from_checkpoint,
    train,
    write_epoch_log,
)
from .classifier.training import load_images
from .classifier.encoding import encode_bytes
from .nn.optim import AdamConfig
from .evaluation import emit_reports, evaluate, figures
from .evaluation.reports import gallery_rows


def _load_config(path: str) -> dict[str, str]:
    values = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line must be key=value: {line!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    """Fill settings from --config; explicit flags win on conflict."""
    if not getattr(args, "config", None):
        return
    explicit = {tok.split("=")[0].lstrip("-").replace("-", "_") for tok in argv if tok.startswith("--")}
    for key, raw in _load_config(args.config).items():
        if key in explicit or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int) and not isinstance(current, bool):
            value = int(raw)
        elif isinstance(current, float):
            value = float(raw)
        else:
            value = raw
        setattr(args, key, value)


def cmd_gen_synthetic(args) -> int:
    docs = generate_corpus(
        Path(args.out), doc_count=args.docs, seed=args.seed, min_kb=args.min_kb, max_kb=args.max_kb
    )
    total = sum(d.size for d in docs)
    print(f"generated {len(docs)} documents, {total} bytes, seed={args.seed}")
    return 0


def cmd_build_corpus(args) -> int:
    source = Path(args.source)
    if not source.is_dir():
        raise FileNotFoundError(f"source directory {source} does not exist")
    docs = discover_documents(source)
    if not docs:
        raise EnvironmentError_(f"no documents found under {source}")
    overrides = {}
    for item in args.tool_cmd or []:
        tool, _, template = item.partition("=")
        if not template:
            raise ValueError(f"--tool-cmd needs tool=TEMPLATE, got {item!r}")
        overrides[tool] = template
    tools = [t.strip() for t in args.tools.split(",") if t.strip()]
    specs, skipped = resolve_tools(tools, overrides)
    for tool, reason in skipped.items():
        print(f"skipping {tool}: {reason}", file=sys.stderr)
    if not specs:
        raise EnvironmentError_("no requested tool is resolvable")
    out = Path(args.out)
    workdir = Path(args.workdir) if args.workdir else out / "work"
    manifest, errors = build_manifest(docs, specs, workdir, out, args.seed)
    for source_id, tool, message in errors:
        print(f"failed {tool} on {source_id}: {message}", file=sys.stderr)
    if not manifest.entries:
        raise EnvironmentError_("every compression attempt failed")
    write_manifest(manifest, out / "manifest.tsv")
    index = build_chunk_index(manifest, skip_first=args.skip_first)
    write_chunk_index(index, out / "chunks.tsv", args.seed)
    tools_present = sorted({e.tool_id for e in manifest.entries})
    print(
        f"manifest: {len(manifest.entries)} entries over {len(tools_present)} tools "
        f"({', '.join(tools_present)}); {len(index)} chunks"
    )
    print(f"wrote {out / 'manifest.tsv'} and {out / 'chunks.tsv'}")
    return 0


def _sts_chunk_reports(args) -> list[ChunkReport]:
    cfg = StsConfig(alpha=args.alpha, paper_mode=args.paper_mode)
    chunks: list[ChunkReport] = []
    if args.raw:
        for raw_path in args.raw:
            data = Path(raw_path).read_bytes()
            if len(data) != FRAGMENT_SIZE:
                raise BadLength(
                    f"reference sample {raw_path} must be exactly {FRAGMENT_SIZE} bytes, "
                    f"got {len(data)}"
                )
            label = Path(raw_path).stem
            frag = Fragment(data, label, (str(raw_path), 0))
            chunks.append(ChunkReport(str(raw_path), label, run_suite(frag, cfg)))
    if args.index:
        index_path = Path(args.index)
        root = index_path.parent
        records = read_chunk_index(index_path)
        selected = sample_chunks(records, SamplerConfig(args.seed, args.per_class))
        for rec in selected:
            frag = read_fragment(root, rec)
            chunks.append(ChunkReport(f"{rec.path}:{rec.ordinal}", rec.label, run_suite(frag, cfg)))
    return chunks


def cmd_sts(args) -> int:
    if not args.index and not args.raw:
        raise ValueError("need --index and/or --raw FILE")
    report_dir = Path(args.report)
    report_dir.mkdir(parents=True, exist_ok=True)
    report = build_report(_sts_chunk_reports(args))
    (report_dir / "results.csv").write_text(results_csv(report, args.seed), encoding="utf-8")
    (report_dir / "summary.csv").write_text(summary_csv(report, args.seed), encoding="utf-8")
    written = ["results.csv", "summary.csv"]
    if args.figures:
        figures.render_pass_rates(report.per_tool_pass_rate, report_dir / "pass_rate.png")
        written.append("pass_rate.png")
    for tool, rate in sorted(report.per_tool_pass_rate.items()):
        print(f"{tool}: pass rate {rate:.3f}")
    print(f"wrote {', '.join(written)} in {report_dir}")
    return 0


def cmd_train(args) -> int:
    index_path = Path(args.index)
    records = read_chunk_index(index_path)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        val_fraction=args.val_fraction,
        seed=args.seed,
        early_stop_patience=args.patience,
        early_stop=not args.no_early_stop,
        per_class=args.per_class,
        split_by_file=args.split_by_file,
    )
    adam = AdamConfig(learning_rate=args.learning_rate)
    result = train(records, index_path.parent, cfg, adam, checkpoint_path=out / "checkpoint.fslc")
    write_epoch_log(result.epoch_log, out / "epoch_log.csv", args.seed)
    if args.figures:
        figures.render_epoch_accuracy(result.epoch_log, out / "epoch_accuracy.png")
    best = result.checkpoint
    if result.stopped_early:
        print(f"stopped early after {len(result.epoch_log)} epochs (validation at chance level)")
    print(
        f"best epoch {best.epoch}: validation accuracy {best.val_accuracy:.4f} "
        f"over {len(best.class_names)} classes ({', '.join(best.class_names)})"
    )
    print(f"wrote {out / 'checkpoint.fslc'} and {out / 'epoch_log.csv'}")
    return 0


def cmd_eval(args) -> int:
    data = load_checkpoint(Path(args.checkpoint))
    model = model_from_checkpoint(data)
    index_path = Path(args.index)
    records = read_chunk_index(index_path)
    if args.per_class:
        records = sample_chunks(records, SamplerConfig(args.seed, args.per_class))
    result = evaluate(model, records, index_path.parent)
    out = Path(args.out)
    emit_reports(result, out, args.seed)
    written = ["confusion.csv", "confusion_pct.csv", "per_class.csv", "gallery.csv"]
    if args.figures:
        figures.render_confusion(result.confusion, out / "confusion_matrix.png")
        rows = gallery_rows(result)
        images = load_images(index_path.parent, records[: len(rows)])
        figures.render_gallery(
            images,
            [r.predicted for r in rows],
            [r.confidence for r in rows],
            [r.true_label for r in rows],
            out / "gallery.png",
        )
        written += ["confusion_matrix.png", "gallery.png"]
    print(f"accuracy {result.accuracy:.4f} over {len(records)} chunks")
    for name in model.class_names:
        recall = result.recalls[name]
        print(f"  recall[{name}] = {'n/a' if recall is None else f'{recall:.4f}'}")
    print(f"wrote {', '.join(written)} in {out}")
    return 0


def cmd_predict(args) -> int:
    data = load_checkpoint(Path(args.checkpoint))
    model = model_from_checkpoint(data)
    for file_path in args.files:
        blob = Path(file_path).read_bytes()
        start = args.chunk * FRAGMENT_SIZE
        if len(blob) < start + FRAGMENT_SIZE:
            raise BadLength(
                f"{file_path}: need at least {start + FRAGMENT_SIZE} bytes "
                f"for chunk {args.chunk}, file has {len(blob)}"
            )
        image = encode_bytes(blob[start : start + FRAGMENT_SIZE])
        probs, labels, confidence = model.predict(image[None, :, :, None])
        prefix = f"{file_path}: " if len(args.files) > 1 else ""
        print(f"{prefix}{labels[0]} {confidence[0]:.4f}")
        if args.verbose:
            vector = " ".join(
                f"{name}={probs[0][i]:.6f}" for i, name in enumerate(model.class_names)
            )
            print(f"{prefix}probabilities: {vector}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fragsleuth",
        description="Compression-tool fingerprinting for 4096-byte file fragments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", default=DEFAULT_SEED, help="run seed (default %(default)s)")
        p.add_argument("--config", help="key=value file; explicit flags win")

    p = sub.add_parser("gen-synthetic", help="generate a seeded synthetic document tree")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--docs", type=int, default=48)
    p.add_argument("--min-kb", type=int, default=256)
    p.add_argument("--max-kb", type=int, default=1536)
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("build-corpus", help="compress documents with each tool and index chunks")
    common(p)
    p.add_argument("--source", required=True, help="document directory")
    p.add_argument("--tools", default=",".join(TOOL_IDS), help="comma-separated tool ids")
    p.add_argument("--out", required=True)
    p.add_argument("--workdir", help="staging area (default <out>/work)")
    p.add_argument("--skip-first", action="store_true", help="exclude chunk 0 of every file")
    p.add_argument(
        "--tool-cmd",
        action="append",
        metavar="TOOL=TEMPLATE",
        help="external command template with {input}/{output} placeholders",
    )
    p.set_defaults(func=cmd_build_corpus)

    p = sub.add_parser("sts", help="run the 15 randomness tests over sampled chunks")
    common(p)
    p.add_argument("--index", help="chunk index file")
    p.add_argument("--per-class", type=int, default=10)
    p.add_argument("--report", required=True, help="output directory")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--raw", action="append", help="raw 4096-byte reference sample (repeatable)")
    p.add_argument("--paper-mode", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_sts)

    p = sub.add_parser("train", help="train the classifier on an indexed corpus")
    common(p)
    p.add_argument("--index", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--val-fraction", type=float, default=0.1)
    p.add_argument("--per-class", type=int, help="cap chunks per class before splitting")
    p.add_argument("--patience", type=int, default=30)
    p.add_argument("--no-early-stop", action="store_true")
    p.add_argument("--learning-rate", type=float, default=0.001)
    p.add_argument("--split-by-file", action="store_true", help="stricter leakage-averse split")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint over labeled chunks")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=int, help="sample this many chunks per class")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="classify 4096-byte chunks of files")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--chunk", type=int, default=0, help="chunk ordinal to classify")
    p.add_argument("--verbose", action="store_true", help="also print the probability vector")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except FragsleuthError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error:contract: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
