"""Data model and file loaders for competency-question datasets.

Three interchange formats are supported:

* dataset CSV   -- one row per question with set label, text, per-rater
                   votes, comment/ambiguity flags and an optional
                   relevance rating;
* annotations JSON -- per-question token-level POS/dependency annotation
                   plus extracted requirement primitives;
* embeddings JSON -- one real vector per question, either inline or as a
                   sidecar pointing at a raw little-endian float32 file.

Everything returned by the loaders is immutable and safe to share across
threads. Embedding vectors are L2-normalized at load time.
"""

from __future__ import annotations

import csv
import json
import math
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

INTERROGATIVE_KINDS = frozenset({"WH", "BOOLEAN", "AGGREGATION", "OTHER"})
CARDINALITY_KINDS = frozenset({"SINGLE", "MULTIPLE", "EXISTENCE"})
DEP_SCHEMES = frozenset({"spacy", "ud"})

_RESERVED_COLUMNS = ("cq_id", "set_id", "text", "commented", "ambiguous", "relevance")
_RATER_COLUMN = re.compile(r"^rater(\d+)$")


class InputError(ValueError):
    """Raised when an input file or value violates the interchange contract."""


@dataclass(frozen=True)
class CompetencyQuestion:
    cq_id: str
    set_id: str
    text: str
    ratings: tuple[int, ...]
    commented: bool
    ambiguous: bool
    relevance: int | None = None
    extra: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.cq_id:
            raise InputError("empty cq_id")
        if not self.text.strip():
            raise InputError(f"empty text for {self.cq_id}")
        for r in self.ratings:
            if r not in (-1, 1):
                raise InputError(f"rating outside {{-1,+1}} for {self.cq_id}: {r}")
        if self.relevance is not None and self.relevance not in (1, 2, 3, 4):
            raise InputError(f"relevance outside 1..4 for {self.cq_id}: {self.relevance}")


@dataclass(frozen=True)
class CQSet:
    set_id: str
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise InputError(f"empty set: {self.set_id}")
        if len(set(self.members)) != len(self.members):
            raise InputError(f"duplicate members in set {self.set_id}")

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    dep: str
    head: int


@dataclass(frozen=True)
class ParseAnnotation:
    cq_id: str
    tokens: tuple[Token, ...]
    noun_chunks: int
    interrogative: str
    dep_scheme: str = "spacy"

    def __post_init__(self) -> None:
        if not self.tokens:
            raise InputError(f"no tokens for {self.cq_id}")
        if self.interrogative not in INTERROGATIVE_KINDS:
            raise InputError(f"unknown interrogative kind for {self.cq_id}: {self.interrogative}")
        if self.dep_scheme not in DEP_SCHEMES:
            raise InputError(f"unknown dep scheme for {self.cq_id}: {self.dep_scheme}")
        n = len(self.tokens)
        roots = [i for i, t in enumerate(self.tokens) if t.head == i]
        for i, t in enumerate(self.tokens):
            if not 0 <= t.head < n:
                raise InputError(f"head out of range for {self.cq_id}: token {i} -> {t.head}")
        if len(roots) != 1:
            raise InputError(f"no root token for {self.cq_id}" if not roots
                             else f"multiple root tokens for {self.cq_id}")

    @property
    def root(self) -> int:
        return next(i for i, t in enumerate(self.tokens) if t.head == i)


def _check_unique_ci(values: Iterable[str], kind: str, cq_id: str) -> None:
    seen: set[str] = set()
    for v in values:
        low = v.lower()
        if low in seen:
            raise InputError(f"duplicate {kind} for {cq_id}: {v!r}")
        seen.add(low)


@dataclass(frozen=True)
class RequirementPrimitives:
    cq_id: str
    concepts: tuple[str, ...]
    properties: tuple[str, ...]
    relationships: tuple[str, ...]
    filters: tuple[str, ...]
    cardinality: str
    aggregation: bool

    def __post_init__(self) -> None:
        if self.cardinality not in CARDINALITY_KINDS:
            raise InputError(f"unknown cardinality for {self.cq_id}: {self.cardinality}")
        _check_unique_ci(self.concepts, "concept", self.cq_id)
        _check_unique_ci(self.properties, "property", self.cq_id)
        _check_unique_ci(self.relationships, "relationship", self.cq_id)
        _check_unique_ci(self.filters, "filter", self.cq_id)


@dataclass(eq=False)
class EmbeddingVector:
    cq_id: str
    values: np.ndarray  # unit-norm float64, read-only

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class Dataset:
    questions: tuple[CompetencyQuestion, ...]
    sets: tuple[CQSet, ...]
    extra_columns: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        sized = sum(len(s) for s in self.sets)
        if sized != len(self.questions):
            raise InputError(f"set partition broken: {sized} members vs {len(self.questions)} questions")

    @property
    def by_id(self) -> dict[str, CompetencyQuestion]:
        return {cq.cq_id: cq for cq in self.questions}

    def get_set(self, set_id: str) -> CQSet:
        for s in self.sets:
            if s.set_id == set_id:
                return s
        raise InputError(f"unknown set: {set_id}")


def _parse_bool(raw: str, column: str, cq_id: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no", ""):
        return False
    raise InputError(f"bad boolean in {column} for {cq_id}: {raw!r}")


def _parse_rating(raw: str, encoding: str, cq_id: str) -> int:
    try:
        value = int(raw.strip())
    except ValueError:
        raise InputError(f"bad rating for {cq_id}: {raw!r}") from None
    if encoding == "zero-one":
        if value not in (0, 1):
            raise InputError(f"rating outside {{0,1}} for {cq_id}: {value}")
        return 1 if value == 1 else -1
    if value not in (-1, 1):
        raise InputError(f"rating outside {{-1,+1}} for {cq_id}: {value}")
    return value


def load_dataset(path: str | Path, rating_encoding: str = "signed") -> Dataset:
    """Load and validate a dataset CSV.

    ``rating_encoding`` is ``"signed"`` for votes stored as -1/1 or
    ``"zero-one"`` for 0/1 files; either way ratings are held as -1/+1.
    Unknown columns are preserved verbatim and round-trip through
    :func:`write_dataset` untouched.
    """
    if rating_encoding not in ("signed", "zero-one"):
        raise InputError(f"unknown rating encoding: {rating_encoding}")
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InputError(f"empty dataset: {path}")
        fields = list(reader.fieldnames)
        rater_cols = sorted(
            (c for c in fields if _RATER_COLUMN.match(c)),
            key=lambda c: int(_RATER_COLUMN.match(c).group(1)),
        )
        missing = [c for c in ("cq_id", "set_id", "text") if c not in fields]
        if missing:
            raise InputError(f"missing columns in {path}: {', '.join(missing)}")
        if not rater_cols:
            raise InputError(f"no rater columns in {path}")
        extra_cols = tuple(c for c in fields if c not in _RESERVED_COLUMNS and not _RATER_COLUMN.match(c))

        questions: list[CompetencyQuestion] = []
        seen_ids: set[str] = set()
        set_order: dict[str, list[str]] = {}
        for row in reader:
            cq_id = (row.get("cq_id") or "").strip()
            if not cq_id:
                raise InputError(f"missing cq_id in row {reader.line_num}")
            if cq_id in seen_ids:
                raise InputError(f"duplicate cq_id: {cq_id}")
            seen_ids.add(cq_id)
            relevance_raw = (row.get("relevance") or "").strip()
            relevance = int(relevance_raw) if relevance_raw else None
            cq = CompetencyQuestion(
                cq_id=cq_id,
                set_id=(row.get("set_id") or "").strip(),
                text=row.get("text") or "",
                ratings=tuple(_parse_rating(row.get(c) or "", rating_encoding, cq_id) for c in rater_cols),
                commented=_parse_bool(row.get("commented") or "", "commented", cq_id),
                ambiguous=_parse_bool(row.get("ambiguous") or "", "ambiguous", cq_id),
                relevance=relevance,
                extra={c: row.get(c) or "" for c in extra_cols},
            )
            questions.append(cq)
            set_order.setdefault(cq.set_id, []).append(cq.cq_id)

    if not questions:
        raise InputError(f"empty dataset: {path}")
    sets = tuple(CQSet(set_id, tuple(members)) for set_id, members in set_order.items())
    return Dataset(tuple(questions), sets, extra_cols)


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset back to CSV in the canonical column order."""
    path = Path(path)
    n_raters = len(dataset.questions[0].ratings)
    rater_cols = [f"rater{i + 1}" for i in range(n_raters)]
    header = ["cq_id", "set_id", "text", *rater_cols, "commented", "ambiguous", "relevance",
              *dataset.extra_columns]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for cq in dataset.questions:
            row = [cq.cq_id, cq.set_id, cq.text,
                   *[str(r) for r in cq.ratings],
                   "true" if cq.commented else "false",
                   "true" if cq.ambiguous else "false",
                   "" if cq.relevance is None else str(cq.relevance)]
            row.extend(cq.extra.get(c, "") for c in dataset.extra_columns)
            writer.writerow(row)


def load_annotations(
    path: str | Path,
    known_ids: set[str] | None = None,
) -> tuple[dict[str, ParseAnnotation], dict[str, RequirementPrimitives]]:
    """Load the annotations JSON into parse and primitives maps.

    When ``known_ids`` is given (usually the ids of an already-loaded
    dataset), annotations for unknown questions are rejected.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "cqs" not in doc:
        raise InputError(f"not an annotations file: {path}")
    dep_scheme = doc.get("dep_scheme", "spacy")

    parses: dict[str, ParseAnnotation] = {}
    prims: dict[str, RequirementPrimitives] = {}
    for entry in doc["cqs"]:
        cq_id = entry.get("cq_id")
        if not cq_id:
            raise InputError(f"annotation without cq_id in {path}")
        if cq_id in parses:
            raise InputError(f"duplicate cq_id: {cq_id}")
        if known_ids is not None and cq_id not in known_ids:
            raise InputError(f"unknown cq_id in annotations: {cq_id}")
        tokens = tuple(
            Token(surface=t["surface"], pos=t["pos"], dep=t["dep"], head=int(t["head"]))
            for t in entry.get("tokens", ())
        )
        parses[cq_id] = ParseAnnotation(
            cq_id=cq_id,
            tokens=tokens,
            noun_chunks=int(entry.get("noun_chunks", 0)),
            interrogative=entry.get("interrogative", "OTHER"),
            dep_scheme=dep_scheme,
        )
        p = entry.get("primitives")
        if p is None:
            raise InputError(f"missing primitives for {cq_id}")
        prims[cq_id] = RequirementPrimitives(
            cq_id=cq_id,
            concepts=tuple(p.get("concepts", ())),
            properties=tuple(p.get("properties", ())),
            relationships=tuple(p.get("relationships", ())),
            filters=tuple(p.get("filters", ())),
            cardinality=p.get("cardinality", "SINGLE"),
            aggregation=bool(p.get("aggregation", False)),
        )
    return parses, prims


def _normalize(values: list[float], cq_id: str, dim: int) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    if vec.shape != (dim,):
        raise InputError(f"dimension mismatch for {cq_id}: {vec.shape[0]} != {dim}")
    if not np.all(np.isfinite(vec)):
        raise InputError(f"non-finite entry for {cq_id}")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise InputError(f"zero vector: {cq_id}")
    out = vec / norm
    if abs(float(np.linalg.norm(out)) - 1.0) > 1e-6:
        raise InputError(f"normalization failed for {cq_id}")
    out.flags.writeable = False
    return out


def load_embeddings(path: str | Path, expected_dim: int | None = None) -> dict[str, EmbeddingVector]:
    """Load embedding vectors, L2-normalizing each in place.

    Accepts the inline JSON form (``{"dim": d, "vectors": {...}}``) or a
    sidecar (``{"dim": d, "ids": [...], "data": "file.f32"}``) paired with
    raw little-endian float32 rows.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "dim" not in doc:
        raise InputError(f"not an embeddings file: {path}")
    dim = int(doc["dim"])
    if expected_dim is not None and dim != expected_dim:
        raise InputError(f"dimension mismatch: file declares {dim}, expected {expected_dim}")

    out: dict[str, EmbeddingVector] = {}
    if "vectors" in doc:
        for cq_id, values in doc["vectors"].items():
            if cq_id in out:
                raise InputError(f"duplicate cq_id: {cq_id}")
            out[cq_id] = EmbeddingVector(cq_id, _normalize(values, cq_id, dim))
    elif "ids" in doc and "data" in doc:
        ids = list(doc["ids"])
        if len(set(ids)) != len(ids):
            raise InputError(f"duplicate cq_id in sidecar: {path}")
        raw = (path.parent / doc["data"]).read_bytes()
        expect = len(ids) * dim * 4
        if len(raw) != expect:
            raise InputError(f"binary payload size mismatch: {len(raw)} != {expect}")
        floats = struct.unpack(f"<{len(ids) * dim}f", raw)
        for i, cq_id in enumerate(ids):
            row = list(floats[i * dim:(i + 1) * dim])
            out[cq_id] = EmbeddingVector(cq_id, _normalize(row, cq_id, dim))
    else:
        raise InputError(f"embeddings file has neither 'vectors' nor 'ids'+'data': {path}")
    return out


def max_norm_error(embeddings: Mapping[str, EmbeddingVector]) -> float:
    """Largest |l2-norm - 1| across loaded embeddings (post-load invariant)."""
    worst = 0.0
    for vec in embeddings.values():
        worst = max(worst, abs(math.sqrt(float(np.dot(vec.values, vec.values))) - 1.0))
    return worst
