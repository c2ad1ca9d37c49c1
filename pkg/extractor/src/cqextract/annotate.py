"""Rule-based linguistic annotation for competency questions.

A compact deterministic pipeline: lexicon-plus-suffix POS tagging, a
head-attachment pass that always yields a single-rooted tree, noun-chunk
counting, interrogative classification by question prefix, and heuristic
requirement primitives. It runs fully offline; swap in a statistical
parser upstream if higher fidelity is needed, the file format is the
contract, not the pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

WH_WORDS = {"which", "what", "who", "whom", "whose", "where", "when", "why", "how"}
AUX_WORDS = {"is", "are", "was", "were", "am", "be", "been", "do", "does", "did",
             "has", "have", "had", "can", "could", "shall", "should", "will",
             "would", "may", "might", "must"}
DETERMINERS = {"the", "a", "an", "each", "every", "all", "any", "some", "this",
               "that", "these", "those", "its", "their", "his", "her", "both", "no"}
ADPOSITIONS = {"of", "in", "on", "at", "by", "to", "with", "from", "for", "about",
               "during", "after", "before", "between", "under", "over", "into",
               "through", "per", "within", "across"}
CCONJ = {"and", "or", "nor", "but"}
PRONOUNS = {"it", "they", "we", "you", "he", "she", "i", "them", "us", "there"}
ADVERBS = {"currently", "recently", "often", "never", "always", "already",
           "still", "now", "then", "how", "most", "least"}
COMMON_VERBS = {
    "store", "stores", "stored", "keep", "keeps", "kept", "loan", "loans",
    "loaned", "borrow", "borrows", "borrowed", "display", "displays",
    "displayed", "exhibit", "exhibits", "exhibited", "own", "owns", "owned",
    "donate", "donates", "donated", "acquire", "acquires", "acquired",
    "describe", "describes", "described", "belong", "belongs", "belonged",
    "contain", "contains", "contained", "record", "records", "recorded",
    "manage", "manages", "managed", "curate", "curates", "curated", "hold",
    "holds", "held", "include", "includes", "included", "relate", "relates",
    "related", "feature", "features", "featured", "verify", "verified",
    "verifies", "use", "uses", "used", "exist", "exists", "existed", "list",
    "lists", "listed", "show", "shows", "shown", "play", "plays", "played",
    "document", "documents", "documented", "link", "links", "linked",
    "catalogue", "catalogued", "handle", "handles", "handled", "need",
    "needs", "needed", "require", "requires", "required", "cover", "covers",
    "covered", "associate", "associated", "represent", "represents",
}
COMMON_ADJECTIVES = {
    "new", "old", "main", "public", "digital", "permanent", "temporary",
    "available", "current", "original", "rare", "famous", "musical", "many",
    "much", "several", "multiple", "last", "next", "known", "unknown",
    "damaged", "restored", "relevant", "physical", "insured",
}

_TOKEN = re.compile(r"[A-Za-z0-9]+(?:[-'][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")


@dataclass(frozen=True)
class AnnotatedToken:
    surface: str
    pos: str
    dep: str
    head: int


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def tag(tokens: list[str]) -> list[str]:
    tags: list[str] = []
    for i, token in enumerate(tokens):
        low = token.lower()
        if not any(ch.isalnum() for ch in token):
            tags.append("PUNCT")
        elif low.isdigit():
            tags.append("NUM")
        elif low in DETERMINERS:
            tags.append("DET")
        elif low in ADPOSITIONS:
            tags.append("ADP")
        elif low in CCONJ:
            tags.append("CCONJ")
        elif low in AUX_WORDS:
            tags.append("AUX")
        elif low in WH_WORDS:
            tags.append("PRON" if i == 0 else "DET")
        elif low in ADVERBS:
            tags.append("ADV")
        elif low in COMMON_VERBS:
            tags.append("VERB")
        elif low in COMMON_ADJECTIVES:
            tags.append("ADJ")
        elif low.endswith("ly") and len(low) > 4:
            tags.append("ADV")
        elif i > 0 and tags[i - 1] == "AUX" and low.endswith("ed"):
            tags.append("VERB")
        else:
            tags.append("NOUN")
    return tags


def attach(tokens: list[str], tags: list[str]) -> list[AnnotatedToken]:
    """Greedy head attachment producing one root and in-range heads."""
    n = len(tokens)
    root = next((i for i, t in enumerate(tags) if t == "VERB"), None)
    if root is None:
        root = next((i for i, t in enumerate(tags) if t == "AUX"), 0)
    heads = [root] * n
    deps = ["dep"] * n
    heads[root] = root
    deps[root] = "ROOT"

    def noun_after(start: int) -> int | None:
        for j in range(start, n):
            if tags[j] in ("NOUN", "NUM", "PRON"):
                return j
            if tags[j] in ("PUNCT", "VERB", "AUX", "ADP", "CCONJ"):
                return None
        return None

    subj_seen = obj_seen = False
    for i in range(n):
        if i == root:
            continue
        t = tags[i]
        if t == "PUNCT":
            deps[i] = "punct"
        elif t == "ADP":
            deps[i] = "agent" if tokens[i].lower() == "by" and tags[root] == "VERB" else "prep"
        elif t == "CCONJ":
            deps[i] = "cc"
        elif t == "AUX":
            deps[i] = "aux"
        elif t == "ADV":
            deps[i] = "advmod"
        elif t in ("DET",):
            target = noun_after(i + 1)
            heads[i] = target if target is not None else root
            deps[i] = "det"
        elif t == "ADJ":
            target = noun_after(i + 1)
            heads[i] = target if target is not None else root
            deps[i] = "amod"
        elif t in ("NOUN", "NUM", "PRON"):
            prev_adp = None
            for j in range(i - 1, -1, -1):
                if tags[j] == "ADP":
                    prev_adp = j
                    break
                if tags[j] not in ("DET", "ADJ", "NOUN", "NUM", "ADV"):
                    break
            prev_cc = i > 0 and tags[i - 1] == "CCONJ"
            if prev_adp is not None:
                heads[i] = prev_adp
                deps[i] = "pobj"
            elif prev_cc:
                deps[i] = "conj"
            elif i < root and not subj_seen:
                deps[i] = "nsubj"
                subj_seen = True
            elif i > root and not obj_seen:
                deps[i] = "dobj"
                obj_seen = True
            else:
                deps[i] = "compound"
                nxt = noun_after(i + 1)
                heads[i] = nxt if nxt is not None else root
    return [AnnotatedToken(tokens[i], tags[i], deps[i], heads[i]) for i in range(n)]


def count_noun_chunks(tags: list[str]) -> int:
    count = 0
    open_chunk = False
    pending = False  # saw DET/ADJ, waiting for the noun
    for t in tags:
        if t in ("NOUN", "NUM", "PRON"):
            if not open_chunk:
                count += 1
            open_chunk = True
            pending = False
        elif t in ("DET", "ADJ"):
            if not pending and open_chunk:
                open_chunk = False  # a fresh determiner starts a new chunk
            pending = True
        else:
            open_chunk = False
            pending = False
    return count


def classify_interrogative(text: str, tags: list[str]) -> str:
    low = text.strip().lower()
    if low.startswith("how many") or low.startswith("how much"):
        return "AGGREGATION"
    first = low.split()[0] if low.split() else ""
    if first in WH_WORDS:
        return "WH"
    if tags and tags[0] == "AUX":
        return "BOOLEAN"
    return "OTHER"


def _singular(noun: str) -> str:
    low = noun.lower()
    if low.endswith("ies") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
        return low[:-1]
    return low


def extract_primitives(tokens: list[str], tags: list[str], kind: str) -> dict:
    concepts: list[str] = []
    properties: list[str] = []
    relationships: list[str] = []
    filters: list[str] = []
    seen: dict[str, set[str]] = {"c": set(), "p": set(), "r": set(), "f": set()}

    def add(bucket: str, dest: list[str], value: str) -> None:
        key = value.lower()
        if key and key not in seen[bucket]:
            seen[bucket].add(key)
            dest.append(value)

    for i, (token, t) in enumerate(zip(tokens, tags)):
        low = token.lower()
        if t == "NOUN":
            base = _singular(low)
            followed_by_of = i + 1 < len(tokens) and tokens[i + 1].lower() == "of"
            if followed_by_of:
                add("p", properties, base)
            else:
                add("c", concepts, base.capitalize())
        elif t == "VERB" and low not in ("list", "exist", "exists"):
            add("r", relationships, low)
        elif t == "ADJ":
            add("f", filters, low)

    plural = any(t == "NOUN" and token.lower().endswith("s") and not token.lower().endswith("ss")
                 for token, t in zip(tokens, tags))
    if kind == "AGGREGATION":
        cardinality = "MULTIPLE"
    elif kind == "BOOLEAN":
        cardinality = "EXISTENCE"
    elif plural:
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


def annotate_text(text: str) -> dict:
    """Full annotation record (sans cq_id) for one question."""
    tokens = tokenize(text)
    if not tokens:
        raise ValueError("cannot annotate empty text")
    tags = tag(tokens)
    annotated = attach(tokens, tags)
    kind = classify_interrogative(text, tags)
    return {
        "tokens": [{"surface": t.surface, "pos": t.pos, "dep": t.dep, "head": t.head}
                   for t in annotated],
        "noun_chunks": count_noun_chunks(tags),
        "interrogative": kind,
        "primitives": extract_primitives(tokens, tags, kind),
    }
