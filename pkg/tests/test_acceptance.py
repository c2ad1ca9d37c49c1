"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL line.

Every expected value here is either hand-derived, produced by an
independent brute-force oracle implemented in this file, or taken from the
published reference tables for the benchmark this toolkit reproduces.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from cqmetrics.cli import run
from cqmetrics.corpus import CQSet, EmbeddingVector, ParseAnnotation, Token
from cqmetrics.complexity import c1_requirement, c3_syntactic
from cqmetrics.evaluation import dataset_agreement, fleiss_kappa, set_summary
from cqmetrics.readability import TextCounts, readability_scores, syllable_count, text_counts
from cqmetrics.semantics import AnalysisConfig, all_pairwise, internal_diversity, kmeans, pairwise_compare
from cqmetrics.corpus import RequirementPrimitives

from test_readability import ORACLE_TABLE, SYLLABLE_VALIDATION

# reference per-set suitability summaries: n, score mean, score std,
# accepted share (two-decimal precision as published)
REFERENCE_SUITABILITY = {
    "HA-1": (44, 2.39, 1.26, 0.91),
    "HA-2": (54, 2.87, 0.62, 0.98),
    "Pattern": (38, 0.11, 2.12, 0.50),
    "GPT": (26, 1.85, 1.52, 0.85),
    "Gemini": (42, 1.52, 1.88, 0.67),
}
REFERENCE_KAPPA = 0.35

# reference pairwise comparison rows: directional coverage percentages and
# the bidirectional coverage, one decimal each
REFERENCE_PAIRWISE = [
    ("HA-1", "HA-2", 20.5, 11.1, 15.3),
    ("HA-1", "Pattern", 15.9, 13.2, 14.6),
    ("HA-1", "GPT", 9.1, 11.5, 10.0),
    ("HA-1", "Gemini", 0.0, 0.0, 0.0),
    ("HA-2", "Pattern", 9.3, 13.2, 10.9),
    ("HA-2", "GPT", 1.9, 3.8, 2.5),
    ("HA-2", "Gemini", 0.0, 0.0, 0.0),
    ("Pattern", "GPT", 5.3, 7.7, 6.2),
    ("Pattern", "Gemini", 2.6, 2.4, 2.5),
    ("GPT", "Gemini", 3.8, 2.4, 2.9),
]


def report(name: str, ok: bool, note: str = "") -> None:
    suffix = f"  [{note}]" if note else ""
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{suffix}")


# ------------------------------------------------------------------ 1


def test_formula_fidelity():
    """FKGL/DCR exact on the hand-computed table; syllables within one of
    a pronunciation dictionary for at least 90 of 100 words; under 1 s."""
    started = time.perf_counter()
    failures = []
    for text, s, w, syl, chars, dw, c3 in ORACLE_TABLE:
        counts = text_counts(text)
        if counts != TextCounts(s, w, syl, chars, dw, c3):
            failures.append(f"counts differ for {text!r}: {counts}")
            continue
        scores = readability_scores(counts)
        if scores.fkgl != 11.8 * (syl / w) + 0.39 * (w / s) - 15.59:
            failures.append(f"fkgl differs for {text!r}")
        if scores.dcr != 0.1579 * (dw / w * 100) + 0.0496 * (w / s):
            failures.append(f"dcr differs for {text!r}")
    assert len(ORACLE_TABLE) == 20

    within = sum(1 for word, expected in SYLLABLE_VALIDATION.items()
                 if abs(syllable_count(word) - expected) <= 1)
    if within < 90:
        failures.append(f"syllables: only {within}/100 within one of the dictionary")
    elapsed = time.perf_counter() - started
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s >= 1s")
    report("formula fidelity", not failures,
           f"20 sentences exact, syllables {within}/100, {elapsed * 1000:.0f} ms")
    assert not failures, failures


# ------------------------------------------------------------------ 2


def bruteforce_kappa(rows):
    cats = sorted({c for row in rows for c in row}, key=repr)
    n_items, n_raters = len(rows), len(rows[0])
    agreements = []
    for row in rows:
        agree = pairs = 0
        for i in range(n_raters):
            for j in range(i + 1, n_raters):
                pairs += 1
                agree += row[i] == row[j]
        agreements.append(agree / pairs)
    p_bar = sum(agreements) / n_items
    p_e = sum((sum(row.count(c) for row in rows) / (n_items * n_raters)) ** 2
              for c in cats)
    if 1.0 - p_e < 1e-15:
        return 1.0
    return (p_bar - p_e) / (1.0 - p_e)


def test_suitability_and_agreement(dataset):
    """Benchmark-fixture summaries against the reference table (means to
    0.01, acceptance shares exact at published precision), kappa against a
    brute-force oracle on 200 random matrices, and the reference kappa on
    the bundled fixture (the released corpus is not redistributable here).

    Two reference means are unreachable by construction: a three-rater
    score is a sum of three odd votes, so set sums are even and 44- or
    54-item means move in steps of 2/44 and 2/54. The references 2.39 and
    2.87 sit between adjacent reachable values (best gaps 0.019 and 0.018),
    so this check reports the discrepancy rather than hiding it.
    """
    failures = []
    summaries = {s.set_id: set_summary(s, dataset.by_id) for s in dataset.sets}
    for set_id, (n, mean, _std, accepted) in REFERENCE_SUITABILITY.items():
        got = summaries[set_id]
        if got.n != n:
            failures.append(f"{set_id}: n {got.n} != {n}")
        if round(got.accepted_pct / 100.0, 2) != accepted:
            failures.append(f"{set_id}: accepted {got.accepted_pct:.2f}% != {accepted}")
        if abs(got.score_mean - mean) > 0.01:
            failures.append(
                f"{set_id}: score mean {got.score_mean:.4f} not within 0.01 of {mean} "
                f"(unreachable: three odd votes sum even, lattice step {2 / n:.4f})")

    rng = random.Random(46)
    for _ in range(200):
        rows = [tuple(rng.choice((-1, 1)) for _ in range(3))
                for _ in range(rng.randint(2, 12))]
        if len({c for row in rows for c in row}) == 1:
            continue
        got = fleiss_kappa(rows).kappa
        want = bruteforce_kappa(rows)
        if abs(got - want) > 1e-9:
            failures.append(f"kappa {got} != bruteforce {want}")
            break

    kappa = dataset_agreement(dataset.questions).kappa
    if abs(kappa - REFERENCE_KAPPA) > 0.01:
        failures.append(f"fixture kappa {kappa:.4f} not within 0.01 of {REFERENCE_KAPPA}")

    report("suitability and agreement", not failures,
           f"kappa {kappa:.4f}; oracle x200 exact to 1e-9; "
           "acceptance shares exact; HA-1/HA-2 means unreachable on the score lattice"
           if failures and all("score mean" in f for f in failures) else f"kappa {kappa:.4f}")
    assert not failures, "\n".join(failures)


# ------------------------------------------------------------------ 3


def bruteforce_compare(ids_a, ids_b, vectors, tau):
    """Independent re-derivation of the directed comparison metrics."""
    best_a = []
    for x in ids_a:
        best = -2.0
        for y in ids_b:
            s = float(np.dot(vectors[x], vectors[y]))
            if s > best:
                best = s
        best_a.append(best)
    best_b = []
    for y in ids_b:
        best = -2.0
        for x in ids_a:
            s = float(np.dot(vectors[y], vectors[x]))
            if s > best:
                best = s
        best_b.append(best)
    n_cov_a = sum(1 for s in best_a if s >= tau)
    n_cov_b = sum(1 for s in best_b if s >= tau)
    n_a, n_b = len(ids_a), len(ids_b)

    def stats(values):
        mean = math.fsum(values) / len(values)
        if len(values) == 1:
            return mean, 0.0
        var = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
        return mean, math.sqrt(var)

    mms_a, mms_a_std = stats(best_a)
    mms_b, mms_b_std = stats(best_b)
    return {
        "mms_a": mms_a, "mms_a_std": mms_a_std,
        "mms_b": mms_b, "mms_b_std": mms_b_std,
        "cov_a": 100.0 * n_cov_a / n_a, "cov_b": 100.0 * n_cov_b / n_b,
        "nov_a": 100.0 - 100.0 * n_cov_a / n_a,
        "nov_b": 100.0 - 100.0 * n_cov_b / n_b,
        "bidir": 100.0 * (n_cov_a + n_cov_b) / (n_a + n_b),
        "n_cov_a": n_cov_a, "n_cov_b": n_cov_b,
    }


def test_semantic_oracle_equivalence():
    """100 random set pairs match a brute-force oracle exactly; the
    degenerate fixtures hit their closed-form extremes. Under 10 s."""
    started = time.perf_counter()
    rng = np.random.default_rng(46)
    failures = []
    for trial in range(100):
        n_a = int(rng.integers(5, 31))
        n_b = int(rng.integers(5, 31))
        dim = int(rng.integers(4, 17))
        tau = float(rng.uniform(0.2, 0.95))
        raw = rng.normal(size=(n_a + n_b, dim))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        ids = [f"t{trial}-{i}" for i in range(n_a + n_b)]
        order = rng.permutation(n_a + n_b)  # member order must not matter
        vectors = {ids[i]: raw[i] for i in range(n_a + n_b)}
        emb = {cq_id: EmbeddingVector(cq_id, vec.copy()) for cq_id, vec in vectors.items()}
        set_a = CQSet("A", tuple(ids[i] for i in order if i < n_a))
        set_b = CQSet("B", tuple(ids[i] for i in order if i >= n_a))
        got = pairwise_compare(set_a, set_b, emb, AnalysisConfig(tau=tau))
        want = bruteforce_compare(sorted(set_a.members), sorted(set_b.members),
                                  vectors, tau)
        checks = [
            ("mms_a", got.mms_a_from_b), ("mms_a_std", got.mms_a_from_b_std),
            ("mms_b", got.mms_b_from_a), ("mms_b_std", got.mms_b_from_a_std),
            ("cov_a", got.cov_a_from_b_pct), ("cov_b", got.cov_b_from_a_pct),
            ("nov_a", got.novelty_a_pct), ("nov_b", got.novelty_b_pct),
            ("bidir", got.bidirectional_pct),
            ("n_cov_a", got.n_cov_a), ("n_cov_b", got.n_cov_b),
        ]
        for key, value in checks:
            if value != want[key]:
                failures.append(f"trial {trial}: {key} {value!r} != {want[key]!r}")

    # self-comparison and entropy extremes
    base = rng.normal(size=(7, 6))
    base /= np.linalg.norm(base, axis=1, keepdims=True)
    emb = {f"s{i}": EmbeddingVector(f"s{i}", base[i]) for i in range(7)}
    s = CQSet("S", tuple(emb))
    self_cmp = pairwise_compare(s, s, emb)
    if self_cmp.cov_a_from_b_pct != 100.0 or self_cmp.bidirectional_pct != 100.0:
        failures.append("self-comparison coverage not 100%")
    if abs(self_cmp.mms_a_from_b - 1.0) > 1e-9:
        failures.append(f"self-comparison MMS {self_cmp.mms_a_from_b}")

    same = EmbeddingVector("x", base[0]).values
    identical = {f"i{i}": EmbeddingVector(f"i{i}", same.copy()) for i in range(6)}
    flat = internal_diversity(CQSet("I", tuple(identical)), identical, AnalysisConfig(k=2))
    if flat.entropy_bits != 0.0:
        failures.append(f"identical-point entropy {flat.entropy_bits} != 0")
    if abs(flat.avg_pairwise_cos - 1.0) > 1e-9 or abs(flat.avg_dist_to_centroid) > 1e-9:
        failures.append("identical-point diversity not degenerate")

    blob_vectors = []
    for c in range(5):
        anchor = np.zeros(12)
        anchor[c] = 40.0
        for _ in range(2):
            blob_vectors.append(anchor + rng.normal(scale=0.01, size=12))
    blobs = {f"b{i}": EmbeddingVector(f"b{i}", unit)
             for i, unit in enumerate(v / np.linalg.norm(v) for v in blob_vectors)}
    spread = internal_diversity(CQSet("B", tuple(blobs)), blobs, AnalysisConfig(k=5))
    if abs(spread.entropy_bits - math.log2(5)) > 1e-12:
        failures.append(f"uniform-blob entropy {spread.entropy_bits} != log2 5")

    elapsed = time.perf_counter() - started
    if elapsed >= 10.0:
        failures.append(f"runtime {elapsed:.2f}s >= 10s")
    report("semantic oracle equivalence", not failures,
           f"100 pairs exact, extremes attained, {elapsed:.2f} s")
    assert not failures, failures[:5]


# ------------------------------------------------------------------ 4


def test_reference_table_consistency(dataset, embeddings):
    """Bidirectional coverage recomputed from the reference table's own
    directional percentages and set sizes matches its published value to
    0.2 points; the bundled fixture reproduces every percentage cell to
    0.2 points. Distribution-dependent cells (MMS, centroid) depend on the
    original embedding model and stay covered by the oracle criterion."""
    sizes = {set_id: ref[0] for set_id, ref in REFERENCE_SUITABILITY.items()}
    failures = []
    for set_a, set_b, cov_a, cov_b, bidir in REFERENCE_PAIRWISE:
        n_a, n_b = sizes[set_a], sizes[set_b]
        covered = round(cov_a / 100.0 * n_a) + round(cov_b / 100.0 * n_b)
        recomputed = 100.0 * covered / (n_a + n_b)
        if abs(recomputed - bidir) > 0.2:
            failures.append(f"{set_a}/{set_b}: recomputed bidir {recomputed:.2f} vs {bidir}")

    by_pair = {(c.set_a, c.set_b): c
               for c in all_pairwise(list(dataset.sets), embeddings)}
    for set_a, set_b, cov_a, cov_b, bidir in REFERENCE_PAIRWISE:
        got = by_pair[(set_a, set_b)]
        for label, have, want in [
            ("cov_a", got.cov_a_from_b_pct, cov_a),
            ("cov_b", got.cov_b_from_a_pct, cov_b),
            ("bidir", got.bidirectional_pct, bidir),
        ]:
            if abs(have - want) > 0.2:
                failures.append(f"{set_a}/{set_b} {label}: {have:.2f} vs {want}")

    report("reference table consistency", not failures,
           "arithmetic cross-check and all 10 fixture rows within 0.2 points")
    assert not failures, failures


# ------------------------------------------------------------------ 5


def oracle_tree_metric(tokens):
    root = next(i for i, t in enumerate(tokens) if t.head == i)
    depth = 0
    for i in range(len(tokens)):
        node, steps = i, 0
        while node != root:
            node = tokens[node].head
            steps += 1
        depth = max(depth, steps)
    wanted = {"nsubj", "dobj", "prep", "acl", "relcl", "conj", "agent"}
    arcs = sum(1 for i, t in enumerate(tokens)
               if i != root and any(p in wanted for p in t.dep.lower().split(":")))
    return len(tokens) + depth + arcs


def test_complexity_oracles(dataset, annotations):
    """Tree metric equals a brute-force path-walking oracle on 100 random
    trees; the primitive count never decreases over 1,000 insertions. The
    released annotation files are not redistributable here, so reference
    complexity means degrade to the structural oracles plus a sanity check
    that the fixture's generated sets keep the published length ordering."""
    failures = []
    rng = random.Random(46)
    deps = ("nsubj", "dobj", "prep", "acl", "relcl", "conj", "agent",
            "det", "amod", "aux", "punct", "pobj")
    for _ in range(100):
        n = rng.randint(1, 12)
        order = list(range(n))
        rng.shuffle(order)
        heads = [0] * n
        heads[order[0]] = order[0]
        attached = [order[0]]
        for node in order[1:]:
            heads[node] = rng.choice(attached)
            attached.append(node)
        tokens = tuple(
            Token(f"w{i}", "NOUN",
                  "ROOT" if heads[i] == i else rng.choice(deps), heads[i])
            for i in range(n))
        ann = ParseAnnotation("t", tokens, 0, "WH")
        if c3_syntactic(ann) != oracle_tree_metric(tokens):
            failures.append(f"tree metric mismatch on {tokens}")
            break

    lists = {"concepts": [], "properties": [], "relationships": [], "filters": []}
    cardinality, aggregation = "SINGLE", False
    previous = 0
    for i in range(1000):
        kind = rng.randrange(6)
        if kind < 4:
            key = list(lists)[kind]
            lists[key].append(f"{key[0]}{i}")
        elif kind == 4:
            aggregation = True
        else:
            cardinality = "MULTIPLE"
        value = c1_requirement(RequirementPrimitives(
            "q", tuple(lists["concepts"]), tuple(lists["properties"]),
            tuple(lists["relationships"]), tuple(lists["filters"]),
            cardinality, aggregation))
        if value < previous:
            failures.append(f"monotonicity broken at step {i}")
            break
        previous = value

    by_id = dataset.by_id
    mean_c0 = {s.set_id: sum(len(by_id[m].text) for m in s.members) / len(s)
               for s in dataset.sets}
    if not (mean_c0["GPT"] > mean_c0["Gemini"] > max(mean_c0["HA-1"], mean_c0["HA-2"], mean_c0["Pattern"])):
        failures.append(f"fixture length ordering broken: {mean_c0}")

    report("complexity oracles", not failures,
           "100 trees exact, 1000 insertions monotone; "
           "reference means degraded (released annotations unavailable)")
    assert not failures, failures


# ------------------------------------------------------------------ 6


def test_report_determinism(fixture_paths, tmp_path, capsys):
    """Two report runs over identical inputs and configuration produce
    byte-identical outputs, including the clustering-derived entropy
    (seed 46, 10 restarts); only the manifest timestamp may differ."""
    args = ["report", "--dataset", str(fixture_paths["dataset"]),
            "--annotations", str(fixture_paths["annotations"]),
            "--embeddings", str(fixture_paths["embeddings"]),
            "--internal-diversity", "--seed", "46", "--restarts", "10"]
    out1, out2 = tmp_path / "first", tmp_path / "second"
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    capsys.readouterr()

    failures = []
    names1 = sorted(p.name for p in out1.iterdir())
    names2 = sorted(p.name for p in out2.iterdir())
    if names1 != names2:
        failures.append(f"file sets differ: {names1} vs {names2}")
    for name in names1:
        first = (out1 / name).read_bytes()
        second = (out2 / name).read_bytes()
        if name == "manifest.json":
            a = json.loads(first)
            b = json.loads(second)
            a.pop("timestamp", None)
            b.pop("timestamp", None)
            if a != b:
                failures.append("manifest differs beyond timestamp")
        elif first != second:
            failures.append(f"{name} differs between runs")

    report("report determinism", not failures,
           f"{len(names1)} files byte-identical (manifest timestamp excluded)")
    assert not failures, failures
