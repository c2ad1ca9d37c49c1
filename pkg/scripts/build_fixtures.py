#!/usr/bin/env python3
"""Build the bundled AskCQ-like benchmark fixture.

Produces tests/data/askcq_like/{dataset.csv,annotations.json,embeddings.json}:
204 museum-domain competency questions in five sets whose rating marginals
sit as close to the published reference summaries as the +/-1 three-rater
score lattice allows (sums of three odd votes are always odd, so two of the
reference means are unreachable; the closest lattice point is used).

Deterministic: fixed seeds, stable iteration order. Re-running overwrites
the fixture files byte-identically.
"""

from __future__ import annotations

import json
import math
import random
import sys
import zlib
from pathlib import Path

import numpy as np

def stable_hash(text: str) -> int:
    return zlib.crc32(text.encode("utf-8"))


ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "askcq_like"

# per set: score counts (+3, +1, -1, -3), commented, ambiguous,
# relevance-3 count, relevance-absent count
SET_PLAN = {
    "HA-1":    dict(counts=(35, 5, 4, 0),   commented=12, ambiguous=9, rel3=8,  rel_none=0),
    "HA-2":    dict(counts=(51, 2, 1, 0),   commented=10, ambiguous=2, rel3=15, rel_none=0),
    "Pattern": dict(counts=(9, 10, 12, 7),  commented=14, ambiguous=5, rel3=5,  rel_none=1),
    "GPT":     dict(counts=(15, 7, 4, 0),   commented=9,  ambiguous=1, rel3=3,  rel_none=1),
    "Gemini":  dict(counts=(25, 3, 14, 0),  commented=13, ambiguous=6, rel3=2,  rel_none=0),
}

ITEMS = [
    "guitar", "violin", "piano", "drum", "trumpet", "harp", "flute", "banjo",
    "poster", "photograph", "costume", "letter", "ticket", "medal", "record",
]
SPACES = ["gallery", "vault", "workshop", "archive room", "main hall", "annex"]
PEOPLE = ["artist", "donor", "curator", "archivist", "partner", "composer", "visitor"]
PROPS = ["condition", "value", "material", "size", "origin", "age", "title", "format"]
EVENTS = ["exhibition", "concert", "tour", "festival", "auction", "loan"]

RATING_PATTERNS = {
    3: [(1, 1, 1)],
    1: [(1, 1, -1), (1, -1, 1), (-1, 1, 1)],
    -1: [(1, -1, -1), (-1, 1, -1), (-1, -1, 1)],
    -3: [(-1, -1, -1)],
}


def ha1_texts(rng: random.Random) -> list[str]:
    out = []
    for item in ITEMS[:11]:
        out.append(f"Who donated the {item}?")
        out.append(f"Where is the {item} kept?")
        out.append(f"When was the {item} acquired?")
        out.append(f"Which {EVENTS[stable_hash(item) % 5]} featured the {item}?")
    return out[:44]


def ha2_texts(rng: random.Random) -> list[str]:
    out = []
    for item in ITEMS[:14]:
        out.append(f"What is the {PROPS[stable_hash(item) % 6]} of the {item}?")
        out.append(f"Which {PEOPLE[stable_hash(item) % 5]} handled the {item} last year?")
        out.append(f"Is the {item} currently on display?")
        out.append(f"How many copies of the {item} exist?")
    return out[:54]


def pattern_texts(rng: random.Random) -> list[str]:
    out = []
    for i, item in enumerate(ITEMS[:13]):
        space = SPACES[i % len(SPACES)]
        person = PEOPLE[i % len(PEOPLE)]
        out.append(f"Which {item} belongs to the {space} collection?")
        out.append(f"Is the {item} a loaned object?")
        out.append(f"List all {item}s with a known {PROPS[i % len(PROPS)]}.")
    return out[:38]


def gpt_texts(rng: random.Random) -> list[str]:
    out = []
    combos = [(a, b) for a in ITEMS[:9] for b in PROPS[:3]]
    for i, (item, prop) in enumerate(combos):
        space = SPACES[i % len(SPACES)]
        person = PEOPLE[i % len(PEOPLE)]
        out.append(
            f"Which {item} items stored in the {space} were loaned to a {person}, "
            f"and what {prop} and insurance value does each item have?"
        )
    return out[:26]


def gemini_texts(rng: random.Random) -> list[str]:
    out = []
    for i, item in enumerate(ITEMS[:14]):
        event = EVENTS[i % len(EVENTS)]
        prop = PROPS[i % len(PROPS)]
        out.append(
            f"What {prop} is recorded for the {item} shown during the {event}, "
            f"and who verified that entry?"
        )
        out.append(
            f"How many multimedia files describe the {item}, and which format do they use?"
        )
        out.append(
            f"Which partner institution borrowed the {item} after the {event} ended?"
        )
    return out[:42]


TEXTS = {
    "HA-1": ha1_texts,
    "HA-2": ha2_texts,
    "Pattern": pattern_texts,
    "GPT": gpt_texts,
    "Gemini": gemini_texts,
}

# ---------------------------------------------------------------- annotator

WH_WORDS = {"which", "what", "who", "whose", "where", "when", "why", "how"}
DETS = {"the", "a", "an", "each", "every", "all", "this", "that", "these", "those"}
ADPS = {"of", "in", "on", "by", "to", "with", "from", "for", "during", "after", "at"}
AUXES = {"is", "are", "was", "were", "do", "does", "did", "has", "have", "had", "can", "exist"}
VERBS = {"donated", "kept", "acquired", "featured", "handled", "stored", "loaned",
         "belongs", "list", "recorded", "shown", "verified", "describe", "use",
         "borrowed", "ended", "display"}
ADJS = {"known", "loaned", "main", "last", "currently", "insurance", "multimedia", "partner"}
ADVS = {"currently", "last"}


def pos_tag(tokens: list[str]) -> list[str]:
    tags = []
    for i, tok in enumerate(tokens):
        low = tok.lower()
        if not any(ch.isalnum() for ch in tok):
            tags.append("PUNCT")
        elif low in DETS:
            tags.append("DET")
        elif low in ADPS:
            tags.append("ADP")
        elif low == "and" or low == "or":
            tags.append("CCONJ")
        elif low in AUXES:
            tags.append("AUX")
        elif low in WH_WORDS:
            tags.append("PRON" if i == 0 else "DET")
        elif low in ADVS and i > 0 and tags[-1] in ("AUX", "VERB"):
            tags.append("ADV")
        elif low in VERBS:
            tags.append("VERB")
        elif low in ADJS:
            tags.append("ADJ")
        elif low.isdigit():
            tags.append("NUM")
        else:
            tags.append("NOUN")
    return tags


def tokenize(text: str) -> list[str]:
    out = []
    cur = ""
    for ch in text:
        if ch.isalnum() or ch == "-":
            cur += ch
        else:
            if cur:
                out.append(cur)
                cur = ""
            if not ch.isspace():
                out.append(ch)
    if cur:
        out.append(cur)
    return out


def parse(tokens: list[str], tags: list[str]) -> list[dict]:
    n = len(tokens)
    root = next((i for i, t in enumerate(tags) if t == "VERB"), None)
    if root is None:
        root = next((i for i, t in enumerate(tags) if t == "AUX"), 0)
    heads = [root] * n
    deps = ["dep"] * n
    heads[root] = root
    deps[root] = "ROOT"

    def next_noun(start: int) -> int | None:
        for j in range(start, n):
            if tags[j] in ("NOUN", "NUM"):
                return j
        return None

    subj_done = False
    obj_done = False
    for i in range(n):
        if i == root:
            continue
        tag = tags[i]
        if tag == "PUNCT":
            deps[i] = "punct"
        elif tag == "ADP":
            deps[i] = "prep"
        elif tag == "CCONJ":
            deps[i] = "cc"
        elif tag == "AUX":
            deps[i] = "aux"
        elif tag in ("DET", "PRON"):
            target = next_noun(i + 1)
            heads[i] = target if target is not None else root
            deps[i] = "det"
        elif tag in ("ADJ", "ADV"):
            target = next_noun(i + 1)
            heads[i] = target if target is not None and tag == "ADJ" else root
            deps[i] = "amod" if tag == "ADJ" else "advmod"
        elif tag in ("NOUN", "NUM"):
            prev_adp = next((j for j in range(i - 1, -1, -1)
                             if tags[j] == "ADP" and all(tags[m] in ("DET", "ADJ", "NOUN", "NUM")
                                                         for m in range(j + 1, i))), None)
            if prev_adp is not None:
                heads[i] = prev_adp
                deps[i] = "pobj"
            elif i < root and not subj_done:
                deps[i] = "nsubj"
                subj_done = True
            elif i > root and not obj_done:
                deps[i] = "dobj"
                obj_done = True
            else:
                deps[i] = "conj" if i > root else "compound"
                heads[i] = root
    return [{"surface": tokens[i], "pos": tags[i], "dep": deps[i], "head": heads[i]}
            for i in range(n)]


def noun_chunks(tags: list[str]) -> int:
    count = 0
    in_chunk = False
    for tag in tags:
        if tag in ("NOUN", "NUM"):
            if not in_chunk:
                count += 1
            in_chunk = True
        elif tag in ("DET", "ADJ", "PRON"):
            in_chunk = in_chunk  # chunk may start here; counted at first noun
        else:
            in_chunk = False
    return count


def interrogative_kind(text: str, tags: list[str]) -> str:
    low = text.lower()
    if low.startswith("how many") or low.startswith("how much"):
        return "AGGREGATION"
    first = low.split()[0] if low.split() else ""
    if first in WH_WORDS:
        return "WH"
    if tags and tags[0] == "AUX":
        return "BOOLEAN"
    return "OTHER"


def singular(noun: str) -> str:
    if noun.endswith("s") and len(noun) > 3 and not noun.endswith("ss"):
        return noun[:-1]
    return noun


def primitives(tokens: list[str], tags: list[str], kind: str) -> dict:
    concepts: list[str] = []
    properties: list[str] = []
    relationships: list[str] = []
    filters: list[str] = []

    def add(dest: list[str], value: str) -> None:
        if value.lower() not in {v.lower() for v in dest}:
            dest.append(value)

    for i, (tok, tag) in enumerate(zip(tokens, tags)):
        low = tok.lower()
        if tag == "NOUN":
            base = singular(low)
            if i + 1 < len(tags) and tags[i + 1] == "ADP" and tokens[i + 1].lower() == "of":
                add(properties, base)
            else:
                add(concepts, base.capitalize())
        elif tag == "VERB" and low != "list":
            add(relationships, low)
        elif tag == "ADJ":
            add(filters, low)

    plural_head = any(t == "NOUN" and tok.lower().endswith("s")
                      for tok, t in zip(tokens, tags))
    if kind == "AGGREGATION":
        cardinality = "MULTIPLE"
    elif kind == "BOOLEAN":
        cardinality = "EXISTENCE"
    elif plural_head:
        cardinality = "MULTIPLE"
    else:
        cardinality = "SINGLE"
    return {
        "concepts": concepts,
        "properties": properties,
        "relationships": relationships,
        "filters": filters,
        "cardinality": cardinality,
        "aggregation": kind == "AGGREGATION",
    }


def annotate(text: str) -> dict:
    tokens = tokenize(text)
    tags = pos_tag(tokens)
    kind = interrogative_kind(text, tags)
    return {
        "tokens": parse(tokens, tags),
        "noun_chunks": noun_chunks(tags),
        "interrogative": kind,
        "primitives": primitives(tokens, tags, kind),
    }


# ---------------------------------------------------------------- builders

def build_rows() -> list[dict]:
    rows = []
    for set_idx, (set_id, plan) in enumerate(SET_PLAN.items()):
        rng = random.Random(1000 + set_idx)
        texts = TEXTS[set_id](rng)
        n = sum(plan["counts"])
        assert len(texts) == n, f"{set_id}: {len(texts)} texts for {n} slots"
        assert len(set(texts)) == n, f"{set_id}: duplicate texts"

        scores = ([3] * plan["counts"][0] + [1] * plan["counts"][1]
                  + [-1] * plan["counts"][2] + [-3] * plan["counts"][3])
        rng.shuffle(scores)

        order_by_score = sorted(range(n), key=lambda i: (scores[i], i))
        commented_idx = set(order_by_score[: plan["commented"]])
        ambiguous_idx = set(order_by_score[: plan["ambiguous"]])
        rel_none_idx = set(order_by_score[-plan["rel_none"]:]) if plan["rel_none"] else set()
        rel3_pool = [i for i in range(n) if i not in rel_none_idx]
        rng.shuffle(rel3_pool)
        rel3_idx = set(rel3_pool[: plan["rel3"]])

        pattern_cycle = {score: 0 for score in RATING_PATTERNS}
        prefix = set_id.replace("-", "").lower()
        for i in range(n):
            score = scores[i]
            options = RATING_PATTERNS[score]
            ratings = options[pattern_cycle[score] % len(options)]
            pattern_cycle[score] += 1
            if i in rel_none_idx:
                relevance = None
            elif i in rel3_idx:
                relevance = 3
            else:
                relevance = 4
            rows.append({
                "cq_id": f"{prefix}-{i + 1:03d}",
                "set_id": set_id,
                "text": texts[i],
                "ratings": ratings,
                "commented": i in commented_idx,
                "ambiguous": i in ambiguous_idx,
                "relevance": relevance,
            })
    return rows


# Directed coverage targets per set pair: lists of twin groups, each group
# being (members of set A, members of set B) given as per-set row positions.
# Every group shares one latent vector, so all its members match each other
# above any sane threshold while everything else stays far below it.
TWIN_GROUPS: dict[tuple[str, str], list[tuple[list[int], list[int]]]] = {
    ("HA-1", "HA-2"): [([0, 1], [0]), ([2, 3], [1]), ([4, 5], [2]),
                       ([6], [3]), ([7], [4]), ([8], [5])],          # 9 vs 6
    ("HA-1", "Pattern"): [([9, 10], [0]), ([11, 12], [1]),
                          ([13], [2]), ([14], [3]), ([15], [4])],    # 7 vs 5
    ("HA-1", "GPT"): [([16, 17], [0]), ([18], [1]), ([19], [2])],    # 4 vs 3
    ("HA-2", "Pattern"): [([6], [5]), ([7], [6]), ([8], [7]),
                          ([9], [8]), ([10], [9])],                  # 5 vs 5
    ("HA-2", "GPT"): [([11], [3])],                                  # 1 vs 1
    ("Pattern", "GPT"): [([10], [4]), ([11], [5])],                  # 2 vs 2
    ("Pattern", "Gemini"): [([12], [0])],                            # 1 vs 1
    ("GPT", "Gemini"): [([6], [1])],                                 # 1 vs 1
}

# component scales: shared base keeps centroid similarity high, themes give
# mild in-set structure, unit noise keeps every non-twin pair far below tau
BASE_SCALE = math.sqrt(384.0)
THEME_SCALE = math.sqrt(85.0)
TWIN_NOISE = 0.35


def build_embeddings(rows: list[dict], dim: int = 384) -> dict[str, list[float]]:
    rng = np.random.default_rng(46)
    base = rng.normal(size=dim)
    base *= BASE_SCALE / np.linalg.norm(base)
    anchors = rng.normal(size=(7, dim))
    anchors /= np.linalg.norm(anchors, axis=1, keepdims=True)

    positions: dict[str, list[str]] = {}
    for row in rows:
        positions.setdefault(row["set_id"], []).append(row["cq_id"])

    twin_center: dict[str, np.ndarray] = {}
    for (set_a, set_b), groups in TWIN_GROUPS.items():
        for g_idx, (members_a, members_b) in enumerate(groups):
            seed = stable_hash(f"{set_a}|{set_b}|{g_idx}")
            g_rng = np.random.default_rng(seed)
            center = base + anchors[seed % 7] * THEME_SCALE + g_rng.normal(size=dim)
            for pos in members_a:
                twin_center[positions[set_a][pos]] = center
            for pos in members_b:
                twin_center[positions[set_b][pos]] = center

    vectors = {}
    for row in rows:
        local = np.random.default_rng(stable_hash(row["cq_id"]))
        center = twin_center.get(row["cq_id"])
        if center is not None:
            vec = center + TWIN_NOISE * local.normal(size=dim)
        else:
            words = {w.lower().strip("?.,") for w in row["text"].split()}
            theme = 0
            for t, group in enumerate([ITEMS[:5], ITEMS[5:10], ITEMS[10:],
                                       SPACES, PEOPLE, PROPS, EVENTS]):
                if words & {g.split()[0] for g in group}:
                    theme = t
                    break
            vec = base + anchors[theme] * THEME_SCALE + local.normal(size=dim)
        vectors[row["cq_id"]] = [float(f"{x:.6g}") for x in vec]
    return vectors


def verify_coverage(rows: list[dict], vectors: dict[str, list[float]], tau: float = 0.75) -> None:
    """Recompute every pair's coverage counts and compare with the plan."""
    members: dict[str, list[str]] = {}
    for row in rows:
        members.setdefault(row["set_id"], []).append(row["cq_id"])
    unit = {cq_id: np.asarray(v) / np.linalg.norm(v) for cq_id, v in vectors.items()}

    def covered(xs: list[str], ys: list[str]) -> int:
        return sum(1 for x in xs
                   if max(float(np.dot(unit[x], unit[y])) for y in ys) >= tau)

    set_ids = list(members)
    planned = {}
    for (a, b), groups in TWIN_GROUPS.items():
        planned[(a, b)] = (sum(len(g[0]) for g in groups), sum(len(g[1]) for g in groups))
    for i, a in enumerate(set_ids):
        for b in set_ids[i + 1:]:
            want = planned.get((a, b), (0, 0))
            got = (covered(members[a], members[b]), covered(members[b], members[a]))
            assert got == want, f"{a} vs {b}: coverage {got}, planned {want}"
            bidir = 100.0 * (got[0] + got[1]) / (len(members[a]) + len(members[b]))
            print(f"  {a:8s} vs {b:8s} cov {got[0]:2d}/{len(members[a]):2d} "
                  f"{got[1]:2d}/{len(members[b]):2d}  bidir {bidir:.1f}%")


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    rows = build_rows()
    assert len(rows) == 204, len(rows)

    lines = ["cq_id,set_id,text,rater1,rater2,rater3,commented,ambiguous,relevance"]
    for row in rows:
        rel = "" if row["relevance"] is None else str(row["relevance"])
        text = row["text"]
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        lines.append(",".join([
            row["cq_id"], row["set_id"], text,
            *[str(r) for r in row["ratings"]],
            "true" if row["commented"] else "false",
            "true" if row["ambiguous"] else "false",
            rel,
        ]))
    (OUT / "dataset.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    annotations = {"dep_scheme": "spacy", "cqs": []}
    for row in rows:
        entry = {"cq_id": row["cq_id"], **annotate(row["text"])}
        annotations["cqs"].append(entry)
    (OUT / "annotations.json").write_text(
        json.dumps(annotations, indent=1, sort_keys=True) + "\n", encoding="utf-8")

    vectors = build_embeddings(rows)
    print("pairwise coverage against plan:")
    verify_coverage(rows, vectors)
    (OUT / "embeddings.json").write_text(
        json.dumps({"dim": 384, "vectors": vectors}, sort_keys=True) + "\n", encoding="utf-8")

    by_set: dict[str, list[int]] = {}
    for row in rows:
        by_set.setdefault(row["set_id"], []).append(sum(row["ratings"]))
    for set_id, scores in by_set.items():
        mean = sum(scores) / len(scores)
        acc = sum(1 for s in scores if s > 0) / len(scores)
        var = sum((s - mean) ** 2 for s in scores) / (len(scores) - 1)
        print(f"{set_id:8s} n={len(scores):3d} mean={mean:.4f} std={math.sqrt(var):.4f} "
              f"accepted={acc:.4f} c0={sum(len(r['text']) for r in rows if r['set_id'] == set_id) / len(scores):.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
