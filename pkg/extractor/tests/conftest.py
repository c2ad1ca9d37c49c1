from __future__ import annotations

from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def dataset_path() -> Path:
    return DATA / "dataset_20.csv"


@pytest.fixture(scope="session")
def story_path() -> Path:
    return DATA / "story.md"


@pytest.fixture(scope="session")
def story_text(story_path) -> str:
    return story_path.read_text(encoding="utf-8")


# Hand-validated relevance subset: question, expected 4-point rating.
# Ratings follow the scale semantics: 4 explicit in the story, 3 inferable
# and functionally necessary, 2 contextually related only, 1 unrelated.
VALIDATED_RELEVANCE = [
    ("Which items are currently on loan?", 4),
    ("What is the insurance value of each item?", 4),
    ("Which multimedia files document an item?", 4),
    ("What is the storage location of a memorabilia item?", 4),
    ("What is the family of an instrument?", 3),
    ("Which condition grades can a report assign?", 3),
    ("How is the condition of an instrument assessed?", 3),
    ("What is the seating capacity of each gallery?", 2),
    ("Which visitors attended the spring exhibition opening?", 2),
    ("What price does a concert ticket have?", 2),
    ("Which planets orbit closest to the sun?", 1),
    ("What temperature should a greenhouse maintain for tomatoes?", 1),
]
