"""Validators for the interchange file formats.

Every output file is checked against these before it is written, so a
consumer never sees a half-formed or contract-breaking file. The rules
mirror the analysis toolkit's loader contracts: the file format is the
only interface shared between the two packages.
"""

from __future__ import annotations

import csv
import io

INTERROGATIVES = {"WH", "BOOLEAN", "AGGREGATION", "OTHER"}
CARDINALITIES = {"SINGLE", "MULTIPLE", "EXISTENCE"}


def validate_dataset_csv(text: str, raters: int = 3) -> list[str]:
    errors: list[str] = []
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return ["empty file"]
    rater_cols = [f"rater{i + 1}" for i in range(raters)]
    for col in ("cq_id", "set_id", "text", "commented", "ambiguous", *rater_cols):
        if col not in reader.fieldnames:
            errors.append(f"missing column: {col}")
    if errors:
        return errors
    seen: set[str] = set()
    rows = 0
    for row in reader:
        rows += 1
        cq_id = row.get("cq_id") or ""
        if not cq_id:
            errors.append(f"row {rows}: empty cq_id")
        elif cq_id in seen:
            errors.append(f"duplicate cq_id: {cq_id}")
        seen.add(cq_id)
        if not (row.get("text") or "").strip():
            errors.append(f"{cq_id}: empty text")
        for col in rater_cols:
            if (row.get(col) or "").strip() not in ("-1", "1"):
                errors.append(f"{cq_id}: bad rating in {col}")
        relevance = (row.get("relevance") or "").strip()
        if relevance and relevance not in ("1", "2", "3", "4"):
            errors.append(f"{cq_id}: relevance outside 1..4")
    if rows == 0:
        errors.append("no data rows")
    return errors


def validate_annotation_entry(entry: dict) -> list[str]:
    errors: list[str] = []
    cq_id = entry.get("cq_id") or "<missing id>"
    tokens = entry.get("tokens") or []
    if not tokens:
        errors.append(f"{cq_id}: no tokens")
        return errors
    n = len(tokens)
    roots = 0
    for i, token in enumerate(tokens):
        for field in ("surface", "pos", "dep"):
            if not isinstance(token.get(field), str) or not token[field]:
                errors.append(f"{cq_id}: token {i} missing {field}")
        head = token.get("head")
        if not isinstance(head, int) or not 0 <= head < n:
            errors.append(f"{cq_id}: token {i} head out of range")
        elif head == i:
            roots += 1
    if roots != 1:
        errors.append(f"{cq_id}: {roots} roots, expected exactly one")
    if not isinstance(entry.get("noun_chunks"), int) or entry["noun_chunks"] < 0:
        errors.append(f"{cq_id}: bad noun_chunks")
    if entry.get("interrogative") not in INTERROGATIVES:
        errors.append(f"{cq_id}: bad interrogative")
    errors.extend(_validate_primitives(cq_id, entry.get("primitives")))
    return errors


def _validate_primitives(cq_id: str, p) -> list[str]:
    if not isinstance(p, dict):
        return [f"{cq_id}: missing primitives"]
    errors = []
    for key in ("concepts", "properties", "relationships", "filters"):
        values = p.get(key)
        if not isinstance(values, list) or any(not isinstance(v, str) for v in values):
            errors.append(f"{cq_id}: bad primitives.{key}")
            continue
        lowered = [v.lower() for v in values]
        if len(set(lowered)) != len(lowered):
            errors.append(f"{cq_id}: duplicate entries in primitives.{key}")
    if p.get("cardinality") not in CARDINALITIES:
        errors.append(f"{cq_id}: bad cardinality")
    if not isinstance(p.get("aggregation"), bool):
        errors.append(f"{cq_id}: bad aggregation flag")
    return errors


def validate_annotations(doc: dict) -> list[str]:
    if not isinstance(doc, dict) or not isinstance(doc.get("cqs"), list):
        return ["not an annotations document"]
    errors: list[str] = []
    seen: set[str] = set()
    for entry in doc["cqs"]:
        cq_id = entry.get("cq_id")
        if not cq_id:
            errors.append("entry without cq_id")
        elif cq_id in seen:
            errors.append(f"duplicate cq_id: {cq_id}")
        else:
            seen.add(cq_id)
        errors.extend(validate_annotation_entry(entry))
    return errors


def validate_embeddings(doc: dict) -> list[str]:
    if not isinstance(doc, dict) or "dim" not in doc or "vectors" not in doc:
        return ["not an embeddings document"]
    errors: list[str] = []
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        return [f"bad dim: {dim!r}"]
    for cq_id, values in doc["vectors"].items():
        if len(values) != dim:
            errors.append(f"{cq_id}: vector length {len(values)} != {dim}")
            continue
        if not all(isinstance(v, (int, float)) and v == v and abs(v) != float("inf")
                   for v in values):
            errors.append(f"{cq_id}: non-finite entry")
        elif all(v == 0 for v in values):
            errors.append(f"{cq_id}: zero vector")
    return errors
