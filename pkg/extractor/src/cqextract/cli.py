"""Command-line entry point for the extraction sidecar.

    cqextract annotate --dataset cqs.csv --out outdir
    cqextract embed    --dataset cqs.csv --out outdir [--backend hashed]
    cqextract assess   --dataset cqs.csv --mode relevance --story story.md --out outdir
    cqextract assess   --dataset cqs.csv --mode primitives --annotations a.json --out outdir

Outputs follow the analysis toolkit's interchange schemas exactly and are
validated before anything is written. Questions are processed in cq_id
order so reruns with identical inputs and configuration give identical
files (embedding files too, for the hashed backend). Per-question
failures are recorded in failures.json and make the exit status nonzero
without aborting the batch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .annotate import annotate_text
from .assess import build_judge, run_with_retry
from .config import ExtractorConfig
from .dataset import read_rows, write_rows
from .embed import build_encoder
from .schemas import validate_annotations, validate_embeddings


def _ordered(rows: list[dict]) -> list[dict]:
    return sorted(rows, key=lambda r: r["cq_id"])


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _finish(out_dir: Path, failures: list[dict]) -> int:
    if failures:
        _write_json(out_dir / "failures.json", {"failures": failures})
        print(f"error: {len(failures)} question(s) failed; see failures.json",
              file=sys.stderr)
        return 1
    return 0


def cmd_annotate(args) -> int:
    _, rows = read_rows(args.dataset)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = ExtractorConfig()
    entries = []
    failures: list[dict] = []
    for row in _ordered(rows):
        try:
            entries.append({"cq_id": row["cq_id"], **annotate_text(row["text"])})
        except Exception as exc:  # record and continue with the batch
            failures.append({"cq_id": row["cq_id"], "error": str(exc)})
    doc = {"dep_scheme": "spacy", "config": config.header(), "cqs": entries}
    errors = validate_annotations(doc)
    if errors:
        print(f"error: generated annotations are invalid: {errors[0]}", file=sys.stderr)
        return 1
    _write_json(out_dir / "annotations.json", doc)
    return _finish(out_dir, failures)


def cmd_embed(args) -> int:
    _, rows = read_rows(args.dataset)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = ExtractorConfig(embedding_model=args.model,
                             embedding_backend=args.backend,
                             embedding_dim=args.dim)
    try:
        encoder, backend_used = build_encoder(args.backend, args.model, args.dim)
    except Exception as exc:
        print(f"error: embedding backend failed to load: {exc}", file=sys.stderr)
        return 1
    ordered = _ordered(rows)
    vectors = encoder.encode_batch([row["text"] for row in ordered])
    doc = {
        "dim": args.dim,
        "config": {**config.header(), "embedding_backend": backend_used},
        "vectors": {row["cq_id"]: [round(float(x), 8) for x in vec]
                    for row, vec in zip(ordered, vectors)},
    }
    errors = validate_embeddings(doc)
    if errors:
        print(f"error: generated embeddings are invalid: {errors[0]}", file=sys.stderr)
        return 1
    _write_json(out_dir / "embeddings.json", doc)
    return 0


def cmd_assess(args) -> int:
    fieldnames, rows = read_rows(args.dataset)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = ExtractorConfig(llm_provider=args.provider,
                             llm_model=args.model or "offline-rule-judge")
    failures: list[dict] = []
    raw_log: list[dict] = []

    if args.mode == "relevance":
        if not args.story:
            print("error: --story is required for relevance mode", file=sys.stderr)
            return 2
        story = Path(args.story).read_text(encoding="utf-8")
        judge = build_judge(args.provider, story, config)
        scored: dict[str, int] = {}
        for row in _ordered(rows):
            result = run_with_retry(lambda: judge.relevance(row["text"]),
                                    row["cq_id"], failures)
            if result is not None:
                value, raw = result
                scored[row["cq_id"]] = value
                raw_log.append({"cq_id": row["cq_id"], "raw": raw})
        for row in rows:
            if row["cq_id"] in scored:
                row["relevance"] = str(scored[row["cq_id"]])
        if "relevance" not in fieldnames:
            fieldnames = fieldnames + ["relevance"]
        write_rows(out_dir / "dataset_with_relevance.csv", fieldnames, rows)

    elif args.mode == "primitives":
        if not args.annotations:
            print("error: --annotations is required for primitives mode", file=sys.stderr)
            return 2
        story = Path(args.story).read_text(encoding="utf-8") if args.story else ""
        judge = build_judge(args.provider, story, config)
        doc = json.loads(Path(args.annotations).read_text(encoding="utf-8"))
        by_id = {row["cq_id"]: row for row in rows}
        for entry in doc.get("cqs", []):
            row = by_id.get(entry["cq_id"])
            if row is None:
                continue
            result = run_with_retry(lambda: judge.primitives(row["text"]),
                                    entry["cq_id"], failures)
            if result is not None:
                entry["primitives"] = result
                raw_log.append({"cq_id": entry["cq_id"], "raw": json.dumps(result)})
        doc["config"] = config.header()
        errors = validate_annotations(doc)
        if errors:
            print(f"error: updated annotations are invalid: {errors[0]}", file=sys.stderr)
            return 1
        _write_json(out_dir / "annotations.json", doc)

    with (out_dir / "raw_responses.jsonl").open("w", encoding="utf-8") as fh:
        for record in raw_log:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    _write_json(out_dir / "assess_config.json", config.header())
    return _finish(out_dir, failures)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqextract",
                                     description="Extraction sidecar for question datasets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    annotate = sub.add_parser("annotate", help="POS/dependency/chunk annotation")
    annotate.add_argument("--dataset", required=True)
    annotate.add_argument("--out", required=True)

    embed = sub.add_parser("embed", help="sentence embeddings")
    embed.add_argument("--dataset", required=True)
    embed.add_argument("--out", required=True)
    embed.add_argument("--backend", choices=["auto", "st", "hashed"], default="auto")
    embed.add_argument("--model", default="all-MiniLM-L6-v2")
    embed.add_argument("--dim", type=int, default=384)

    assess = sub.add_parser("assess", help="LLM relevance or primitives assessment")
    assess.add_argument("--dataset", required=True)
    assess.add_argument("--out", required=True)
    assess.add_argument("--mode", choices=["relevance", "primitives"], required=True)
    assess.add_argument("--story")
    assess.add_argument("--annotations")
    assess.add_argument("--provider", choices=["rule", "openai"], default="rule")
    assess.add_argument("--model")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "annotate":
            return cmd_annotate(args)
        if args.command == "embed":
            return cmd_embed(args)
        return cmd_assess(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
