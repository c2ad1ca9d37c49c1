from __future__ import annotations

from pathlib import Path

import pytest

from cqmetrics.corpus import load_annotations, load_dataset, load_embeddings

FIXTURES = Path(__file__).parent / "data" / "askcq_like"


@pytest.fixture(scope="session")
def fixture_paths() -> dict[str, Path]:
    return {
        "dataset": FIXTURES / "dataset.csv",
        "annotations": FIXTURES / "annotations.json",
        "embeddings": FIXTURES / "embeddings.json",
    }


@pytest.fixture(scope="session")
def dataset(fixture_paths):
    return load_dataset(fixture_paths["dataset"])


@pytest.fixture(scope="session")
def annotations(fixture_paths, dataset):
    return load_annotations(fixture_paths["annotations"], known_ids=set(dataset.by_id))


@pytest.fixture(scope="session")
def embeddings(fixture_paths):
    return load_embeddings(fixture_paths["embeddings"], expected_dim=384)
