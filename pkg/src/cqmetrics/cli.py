"""Command-line entry point: corpus in, report tables out.

Subcommands
    features     per-question readability + complexity feature table
    suitability  per-set rating summaries, flags and rater agreement
    diversity    within-set embedding diversity (pairwise, dispersion, entropy)
    compare      directed coverage/novelty for every set pair
    correlate    Pearson correlation of each feature against the score
    report       everything above plus profiles and a combined summary.json

All outputs are accumulated in memory and written together, so a failed
run leaves no partial files. Every run also writes ``manifest.json``
recording the tool version, input checksums and configuration; apart from
the manifest timestamp, identical inputs and configuration produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .complexity import complexity_profile, set_complexity
from .corpus import Dataset, InputError, load_annotations, load_dataset, load_embeddings
from .evaluation import dataset_agreement, relevance_distribution, set_summary, suitability
from .readability import load_familiar_words, score_text, set_readability
from .semantics import AnalysisConfig, all_pairwise, internal_diversity
from .stats import FeatureVector, correlate, minmax_profiles

BASE_FEATURES = ("fkgl", "dcr", "c0", "c1", "c2", "c3", "ambiguity", "relevance", "score")
EXTRA_FEATURES = ("gfi", "cli", "ari")


def _pct(x: float) -> str:
    return f"{x:.1f}"


def _num(x: float) -> str:
    return f"{x:.4f}"


def _csv_bytes(header: list[str], rows: list[list[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _json_bytes(obj: object) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def build_features(
    dataset: Dataset,
    parses: dict,
    prims: dict,
    familiar: frozenset[str] | None,
    extras: bool,
) -> list[FeatureVector]:
    """Assemble the per-question feature vectors used by profiles/correlations."""
    rows = []
    for cq in dataset.questions:
        if cq.cq_id not in parses or cq.cq_id not in prims:
            raise InputError(f"missing annotation: {cq.cq_id}")
        scores = score_text(cq.text, familiar)
        profile = complexity_profile(cq, parses[cq.cq_id], prims[cq.cq_id])
        features: dict[str, float | None] = {
            "fkgl": scores.fkgl,
            "dcr": scores.dcr,
            "c0": float(profile.c0),
            "c1": float(profile.c1),
            "c2": float(profile.c2),
            "c3": float(profile.c3),
            "ambiguity": 1.0 if cq.ambiguous else 0.0,
            "relevance": float(cq.relevance) if cq.relevance is not None else None,
            "score": float(suitability(cq).score),
        }
        if extras:
            features.update(gfi=scores.gfi, cli=scores.cli, ari=scores.ari)
        rows.append(FeatureVector(cq_id=cq.cq_id, set_id=cq.set_id, features=features))
    return rows


def _select_sets(dataset: Dataset, only: list[str] | None):
    if not only:
        return list(dataset.sets)
    return [dataset.get_set(s) for s in only]


def _features_outputs(dataset, parses, prims, familiar, extras, sets):
    wanted = {s.set_id for s in sets}
    vectors = build_features(dataset, parses, prims, familiar, extras)
    by_id = dataset.by_id
    header = ["cq_id", "set_id", "score", "accepted", "commented", "ambiguous", "relevance",
              "fkgl", "dcr"]
    if extras:
        header += ["gfi", "cli", "ari"]
    header += ["c0", "c1", "c2", "c3", "interrogative"]
    rows = []
    for fv in vectors:
        if fv.set_id not in wanted:
            continue
        cq = by_id[fv.cq_id]
        profile_interrogative = parses[fv.cq_id].interrogative
        row = [fv.cq_id, fv.set_id,
               str(int(fv.get("score"))),
               "true" if fv.get("score") > 0 else "false",
               "true" if cq.commented else "false",
               "true" if cq.ambiguous else "false",
               "" if fv.get("relevance") is None else str(int(fv.get("relevance"))),
               _num(fv.get("fkgl")), _num(fv.get("dcr"))]
        if extras:
            row += [_num(fv.get("gfi")), _num(fv.get("cli")), _num(fv.get("ari"))]
        row += [str(int(fv.get("c0"))), str(int(fv.get("c1"))), str(int(fv.get("c2"))),
                str(int(fv.get("c3"))), profile_interrogative]
        rows.append(row)
    return {"features.csv": _csv_bytes(header, rows)}, vectors


def _suitability_outputs(dataset, sets):
    by_id = dataset.by_id
    summaries = [set_summary(s, by_id) for s in sets]
    agreement = dataset_agreement(dataset.questions)
    t1_rows = [[s.set_id, str(s.n), _pct(s.commented_pct), _num(s.score_mean),
                _num(s.score_std), _pct(s.accepted_pct)] for s in summaries]
    t2_rows = [[s.set_id, _pct(s.ambiguous_pct),
                "" if s.relevance_score3_pct is None else _pct(s.relevance_score3_pct)]
               for s in summaries]
    rel_rows = []
    for s in sets:
        for value, (count, pct) in relevance_distribution(s, by_id).items():
            rel_rows.append([s.set_id, str(value), str(count), _pct(pct)])
    outputs = {
        "suitability.csv": _csv_bytes(
            ["set_id", "n", "commented_pct", "score_mean", "score_std", "accepted_pct"], t1_rows),
        "flags.csv": _csv_bytes(["set_id", "ambiguous_pct", "relevance3_pct"], t2_rows),
        "relevance_long.csv": _csv_bytes(["set_id", "relevance", "count", "pct"], rel_rows),
        "agreement.json": _json_bytes(asdict(agreement)),
    }
    return outputs, summaries, agreement


def _compare_outputs(sets, embeddings, cfg):
    comparisons = all_pairwise(sets, embeddings, cfg)
    rows = [[c.set_a, c.set_b, _num(c.centroid_sim),
             _pct(c.cov_a_from_b_pct), _num(c.mms_a_from_b), _num(c.mms_a_from_b_std),
             _pct(c.cov_b_from_a_pct), _num(c.mms_b_from_a), _num(c.mms_b_from_a_std),
             _pct(c.bidirectional_pct)] for c in comparisons]
    header = ["set_a", "set_b", "centroid_sim", "cov_a_pct", "mms_a", "mms_a_std",
              "cov_b_pct", "mms_b", "mms_b_std", "bidir_pct"]
    return {"compare.csv": _csv_bytes(header, rows)}, comparisons


def _diversity_outputs(sets, embeddings, cfg):
    results = [internal_diversity(s, embeddings, cfg) for s in sets]
    rows = [[d.set_id, _num(d.avg_pairwise_cos), _num(d.avg_pairwise_cos_std),
             _num(d.avg_dist_to_centroid), _num(d.avg_dist_to_centroid_std),
             _num(d.entropy_bits)] for d in results]
    header = ["set_id", "avg_pairwise_cos", "avg_pairwise_cos_std",
              "avg_dist_centroid", "avg_dist_centroid_std", "entropy_bits"]
    return {"diversity.csv": _csv_bytes(header, rows)}, results


def _correlate_outputs(vectors, extras):
    names = list(BASE_FEATURES[:-1]) + (list(EXTRA_FEATURES) if extras else [])
    results, warn = correlate(vectors, target="score", feature_names=names)
    rows = [[c.feature, _num(c.r), str(c.n)] for c in results]
    return {"correlations.csv": _csv_bytes(["feature", "r", "n"], rows)}, results, warn


def _aggregate_sets(dataset, parses, prims, familiar, extras, sets):
    by_id = dataset.by_id
    readability_sets = {}
    complexity_sets = {}
    indices = ("fkgl", "dcr") + (EXTRA_FEATURES if extras else ())
    for s in sets:
        scores = [score_text(by_id[m].text, familiar) for m in s.members]
        profiles = [complexity_profile(by_id[m], parses[m], prims[m]) for m in s.members]
        readability_sets[s.set_id] = set_readability(scores, indices)
        complexity_sets[s.set_id] = set_complexity(profiles)
    read_rows = [[sid, idx, _num(m), _num(sd)]
                 for sid, d in readability_sets.items() for idx, (m, sd) in d.items()]
    comp_rows = [[sid, facet, _num(m), _num(sd)]
                 for sid, d in complexity_sets.items() for facet, (m, sd) in d.items()]
    outputs = {
        "readability_sets.csv": _csv_bytes(["set_id", "index", "mean", "std"], read_rows),
        "complexity_sets.csv": _csv_bytes(["set_id", "facet", "mean", "std"], comp_rows),
    }
    return outputs, readability_sets, complexity_sets


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqmetrics",
        description="Quantitative comparison of competency-question sets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("features", "per-question feature table"),
        ("suitability", "per-set rating summaries and agreement"),
        ("diversity", "within-set embedding diversity"),
        ("compare", "pairwise set coverage and novelty"),
        ("correlate", "feature-score correlations"),
        ("report", "all tables plus summary.json"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dataset", required=True, help="dataset CSV")
        p.add_argument("--annotations", help="annotations JSON")
        p.add_argument("--embeddings", help="embeddings JSON")
        p.add_argument("--tau", type=float, default=0.75, help="coverage threshold (default 0.75)")
        p.add_argument("--k", type=int, default=5, help="cluster count (default 5)")
        p.add_argument("--seed", type=int, default=46, help="random seed (default 46)")
        p.add_argument("--restarts", type=int, default=10, help="k-means restarts (default 10)")
        p.add_argument("--sets", help="comma-separated set ids (default: all)")
        p.add_argument("--rating-encoding", choices=["signed", "zero-one"], default="signed")
        p.add_argument("--dale-chall-list", help="override the bundled familiar-word list")
        p.add_argument("--extra-readability", action="store_true",
                       help="also compute GFI, CLI and ARI")
        p.add_argument("--internal-diversity", action="store_true",
                       help="include internal diversity in the report")
        p.add_argument("--out", help="output directory (or env CQMETRICS_OUT)")
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name} is required for '{args.command}'")


def run(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    out_dir = Path(args.out or os.environ.get("CQMETRICS_OUT") or "cqmetrics-out")
    try:
        outputs = _dispatch(args)
        _write_outputs(out_dir, outputs)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _dispatch(args) -> dict[str, bytes]:
    dataset = load_dataset(args.dataset, rating_encoding=args.rating_encoding)
    sets = _select_sets(dataset, args.sets.split(",") if args.sets else None)
    familiar = load_familiar_words(args.dale_chall_list) if args.dale_chall_list else None
    cfg = AnalysisConfig(tau=args.tau, k=args.k, seed=args.seed, restarts=args.restarts)
    extras = args.extra_readability
    inputs = {"dataset": args.dataset}
    outputs: dict[str, bytes] = {}
    summary: dict[str, object] = {}

    def load_ann():
        inputs["annotations"] = args.annotations
        return load_annotations(args.annotations, known_ids=set(dataset.by_id))

    def load_emb():
        inputs["embeddings"] = args.embeddings
        return load_embeddings(args.embeddings)

    if args.command == "features":
        _require(args, "annotations")
        parses, prims = load_ann()
        files, _ = _features_outputs(dataset, parses, prims, familiar, extras, sets)
        outputs.update(files)

    elif args.command == "suitability":
        files, summaries, agreement = _suitability_outputs(dataset, sets)
        outputs.update(files)

    elif args.command == "diversity":
        _require(args, "embeddings")
        embeddings = load_emb()
        files, _ = _diversity_outputs(sets, embeddings, cfg)
        outputs.update(files)

    elif args.command == "compare":
        _require(args, "embeddings")
        embeddings = load_emb()
        files, _ = _compare_outputs(sets, embeddings, cfg)
        outputs.update(files)

    elif args.command == "correlate":
        _require(args, "annotations")
        parses, prims = load_ann()
        vectors = build_features(dataset, parses, prims, familiar, extras)
        files, _, warn = _correlate_outputs(vectors, extras)
        outputs.update(files)

    elif args.command == "report":
        _require(args, "annotations", "embeddings")
        parses, prims = load_ann()
        embeddings = load_emb()

        feat_files, vectors = _features_outputs(dataset, parses, prims, familiar, extras, sets)
        suit_files, summaries, agreement = _suitability_outputs(dataset, sets)
        comp_files, comparisons = _compare_outputs(sets, embeddings, cfg)
        corr_files, correlations, corr_warnings = _correlate_outputs(vectors, extras)
        agg_files, readability_sets, complexity_sets = _aggregate_sets(
            dataset, parses, prims, familiar, extras, sets)
        for files in (feat_files, suit_files, comp_files, corr_files, agg_files):
            outputs.update(files)

        profiles = minmax_profiles(vectors)
        outputs["profiles.csv"] = _profiles_csv(profiles)

        summary = {
            "suitability": [asdict(s) for s in summaries],
            "agreement": asdict(agreement),
            "relevance_distribution": {
                s.set_id: relevance_distribution(s, dataset.by_id) for s in sets},
            "readability_sets": readability_sets,
            "complexity_sets": complexity_sets,
            "comparisons": [asdict(c) for c in comparisons],
            "profiles": profiles,
            "correlations": [asdict(c) for c in correlations],
            "warnings": corr_warnings,
        }
        if args.internal_diversity:
            div_files, diversity = _diversity_outputs(sets, embeddings, cfg)
            outputs.update(div_files)
            summary["diversity"] = [asdict(d) for d in diversity]
        outputs["summary.json"] = _json_bytes(summary)

    outputs["manifest.json"] = _manifest(args, inputs, cfg)
    return outputs


def _profiles_csv(profiles: dict[str, dict[str, float]]) -> bytes:
    names = sorted({name for p in profiles.values() for name in p})
    rows = [[set_id] + [_num(p[name]) if name in p else "" for name in names]
            for set_id, p in profiles.items()]
    return _csv_bytes(["set_id"] + names, rows)


def _manifest(args, inputs: dict[str, str], cfg: AnalysisConfig) -> bytes:
    doc = {
        "tool": "cqmetrics",
        "version": __version__,
        "command": args.command,
        "inputs": {name: _sha256(Path(path)) for name, path in inputs.items()},
        "config": {
            "tau": cfg.tau,
            "k": cfg.k,
            "seed": cfg.seed,
            "restarts": cfg.restarts,
            "sets": args.sets,
            "rating_encoding": args.rating_encoding,
            "dale_chall_list": args.dale_chall_list,
            "extra_readability": args.extra_readability,
            "internal_diversity": args.internal_diversity,
        },
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return _json_bytes(doc)


def _write_outputs(out_dir: Path, outputs: dict[str, bytes]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, blob in sorted(outputs.items()):
            target = out_dir / name
            target.write_bytes(blob)
            written.append(target)
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
