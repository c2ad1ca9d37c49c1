"""Minimal dataset CSV access for the sidecar (read rows, write augmented)."""

from __future__ import annotations

import csv
from pathlib import Path

from .schemas import validate_dataset_csv


def read_rows(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Return (fieldnames, rows); the file must satisfy the dataset schema."""
    text = Path(path).read_text(encoding="utf-8")
    errors = validate_dataset_csv(text)
    if errors:
        raise ValueError(f"invalid dataset {path}: {errors[0]}")
    reader = csv.DictReader(text.splitlines())
    return list(reader.fieldnames), list(reader)


def write_rows(path: str | Path, fieldnames: list[str], rows: list[dict[str, str]]) -> None:
    text_rows = []
    for row in rows:
        text_rows.append({k: row.get(k, "") for k in fieldnames})
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(text_rows)
